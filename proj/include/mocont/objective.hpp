#ifndef MOCONT_OBJECTIVE_HPP
#define MOCONT_OBJECTIVE_HPP

#include <cstddef>
#include <memory>
#include <vector>

#include "mocont/linalg.hpp"

namespace mocont {

enum class HessianMode { analytic, finite_difference, sr1 };

// A twice continuously differentiable objective. Evaluation is pure and
// reentrant; models are shareable read-only across threads.
class ObjectiveModel {
public:
    virtual ~ObjectiveModel() = default;

    virtual std::size_t dim() const = 0;
    virtual double value(const Vector& x) const = 0;
    virtual Vector gradient(const Vector& x) const = 0;

    // Defaults to central finite differences of the gradient.
    virtual DenseMatrix hessian(const Vector& x) const;

    // Row j of the Hessian; problems with structure (e.g. separable ones)
    // override this to avoid materializing the full matrix.
    virtual Vector hessian_row(const Vector& x, std::size_t j) const;

    // Hessian restricted to the given (sorted) index set, rows and columns.
    virtual DenseMatrix hessian_reduced(const Vector& x, const std::vector<std::size_t>& idx) const;
};

using ModelPtr = std::shared_ptr<ObjectiveModel>;

}  // namespace mocont

#endif
