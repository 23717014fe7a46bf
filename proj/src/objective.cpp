#include "mocont/objective.hpp"

namespace mocont {

DenseMatrix ObjectiveModel::hessian(const Vector& x) const {
    return fd_hessian([this](const Vector& z) { return gradient(z); }, x);
}

Vector ObjectiveModel::hessian_row(const Vector& x, std::size_t j) const {
    return hessian(x).row(j);
}

DenseMatrix ObjectiveModel::hessian_reduced(const Vector& x,
                                            const std::vector<std::size_t>& idx) const {
    return hessian(x).submatrix(idx, idx);
}

}  // namespace mocont
