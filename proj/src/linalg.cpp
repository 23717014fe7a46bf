#include "mocont/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mocont/objective.hpp"

namespace mocont {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix I(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Vector DenseMatrix::row(std::size_t i) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

DenseMatrix DenseMatrix::submatrix(const std::vector<std::size_t>& row_idx,
                                   const std::vector<std::size_t>& col_idx) const {
    DenseMatrix S(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i)
        for (std::size_t j = 0; j < col_idx.size(); ++j)
            S(i, j) = (*this)(row_idx[i], col_idx[j]);
    return S;
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Vector matvec(const DenseMatrix& A, const Vector& x) {
    if (x.size() != A.cols()) throw DimensionMismatch("matvec: size mismatch");
    Vector y(A.rows(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols() != B.rows()) throw DimensionMismatch("matmul: size mismatch");
    DenseMatrix C(A.rows(), B.cols(), 0.0);
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const double a = A(i, k);
            if (a == 0.0) continue;
            for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += a * B(k, j);
        }
    return C;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double norm1(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

Vector axpy(double alpha, const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw DimensionMismatch("axpy: size mismatch");
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = alpha * x[i] + y[i];
    return r;
}

Vector scale(double alpha, const Vector& v) {
    Vector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = alpha * v[i];
    return r;
}

Vector sub(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("sub: size mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

LuFactors lu_factor(const DenseMatrix& A, double pivot_rel_tol) {
    if (A.rows() != A.cols()) throw DimensionMismatch("lu_factor: matrix not square");
    const std::size_t n = A.rows();
    const double pivot_tol = pivot_rel_tol * std::max(A.max_abs(), 1e-300);

    DenseMatrix U = A;
    DenseMatrix L = DenseMatrix::identity(n);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    LuFactors f;
    f.parity = 1;
    f.pivot_tol = pivot_tol;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(U(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(U(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(U(k, j), U(p, j));
            for (std::size_t j = 0; j < k; ++j) std::swap(L(k, j), L(p, j));
            std::swap(perm[k], perm[p]);
            f.parity = -f.parity;
        }
        const double piv = U(k, k);
        if (std::abs(piv) < pivot_tol) {
            f.singular = true;
            continue;  // keep factoring so det_sign can report 0 cleanly
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = U(i, k) / piv;
            L(i, k) = m;
            U(i, k) = 0.0;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) U(i, j) -= m * U(k, j);
        }
    }

    f.permutation = std::move(perm);
    f.lower = std::move(L);
    f.upper = std::move(U);
    return f;
}

Vector LuFactors::solve(const Vector& b) const {
    if (singular) throw SingularMatrix("lu_solve: pivot below tolerance");
    const std::size_t n = permutation.size();
    if (b.size() != n) throw DimensionMismatch("lu_solve: rhs size mismatch");

    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[permutation[i]];
        for (std::size_t j = 0; j < i; ++j) {
            if (lower(i, j) != 0.0) s -= lower(i, j) * y[j];
        }
        y[i] = s;
    }
    Vector x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) {
            if (upper(ii, j) != 0.0) s -= upper(ii, j) * x[j];
        }
        x[ii] = s / upper(ii, ii);
    }
    return x;
}

int LuFactors::det_sign() const {
    if (singular) return 0;
    int s = parity;
    for (std::size_t i = 0; i < permutation.size(); ++i) {
        const double u = upper(i, i);
        if (std::abs(u) < pivot_tol) return 0;
        if (u < 0.0) s = -s;
    }
    return s;
}

Vector lu_solve(const DenseMatrix& A, const Vector& b, double pivot_rel_tol) {
    return lu_factor(A, pivot_rel_tol).solve(b);
}

int det_sign(const DenseMatrix& A, double pivot_rel_tol) {
    return lu_factor(A, pivot_rel_tol).det_sign();
}

DenseMatrix sr1_update(const DenseMatrix& H, const Vector& step, const Vector& grad_diff,
                       double skip_tol) {
    if (step.size() != grad_diff.size() || step.size() != H.rows() || H.rows() != H.cols())
        throw DimensionMismatch("sr1_update: size mismatch");
    Vector v = sub(grad_diff, matvec(H, step));  // y - H s
    const double denom = dot(v, step);
    if (std::abs(denom) < skip_tol * norm2(step) * norm2(v)) return H;
    DenseMatrix out = H;
    const double inv = 1.0 / denom;
    for (std::size_t i = 0; i < H.rows(); ++i)
        for (std::size_t j = 0; j < H.cols(); ++j) out(i, j) += v[i] * v[j] * inv;
    return out;
}

double fd_gradient_check(const ObjectiveModel& model, const Vector& x) {
    const Vector g = model.gradient(x);
    Vector xp = x, xm = x;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * (1.0 + std::abs(x[i]));
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        const double fd = (model.value(xp) - model.value(xm)) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
        const double denom = std::max({1.0, std::abs(g[i]), std::abs(fd)});
        worst = std::max(worst, std::abs(fd - g[i]) / denom);
    }
    return worst;
}

DenseMatrix fd_hessian(const std::function<Vector(const Vector&)>& grad, const Vector& x,
                       double rel_step) {
    const std::size_t n = x.size();
    DenseMatrix H(n, n, 0.0);
    Vector xp = x, xm = x;
    for (std::size_t j = 0; j < n; ++j) {
        const double h = rel_step * (1.0 + std::abs(x[j]));
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        const Vector gp = grad(xp);
        const Vector gm = grad(xm);
        xp[j] = x[j];
        xm[j] = x[j];
        for (std::size_t i = 0; i < n; ++i) H(i, j) = (gp[i] - gm[i]) / (2.0 * h);
    }
    // symmetrize; the column-wise estimates differ by O(h^2)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (H(i, j) + H(j, i));
            H(i, j) = v;
            H(j, i) = v;
        }
    return H;
}

}  // namespace mocont
