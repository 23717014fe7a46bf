#ifndef MOCONT_LINALG_HPP
#define MOCONT_LINALG_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "mocont/errors.hpp"

namespace mocont {

using Vector = std::vector<double>;

// Dense row-major matrix for small-to-moderate dimensions.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Vector row(std::size_t i) const;
    DenseMatrix submatrix(const std::vector<std::size_t>& row_idx,
                          const std::vector<std::size_t>& col_idx) const;

    double max_abs() const;
    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Vector matvec(const DenseMatrix& A, const Vector& x);
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);

// Vector helpers.
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double norm_inf(const Vector& v);
double norm1(const Vector& v);
Vector axpy(double alpha, const Vector& x, const Vector& y);  // alpha*x + y
Vector scale(double alpha, const Vector& v);
Vector sub(const Vector& a, const Vector& b);

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// LU factorization with partial pivoting, P*A = L*U.
struct LuFactors {
    std::vector<std::size_t> permutation;  // row i of PA is row permutation[i] of A
    DenseMatrix lower;
    DenseMatrix upper;
    int parity = 1;     // sign of the permutation
    bool singular = false;
    double pivot_tol = 0.0;

    Vector solve(const Vector& b) const;  // throws SingularMatrix if singular
    int det_sign() const;                 // 0 if a pivot underflowed pivot_tol
};

// pivot_rel_tol scales with max|A|; a pivot below pivot_rel_tol*max|A| marks
// the factorization singular (solve throws, det_sign returns 0).
LuFactors lu_factor(const DenseMatrix& A, double pivot_rel_tol = 1e-12);

Vector lu_solve(const DenseMatrix& A, const Vector& b, double pivot_rel_tol = 1e-12);
int det_sign(const DenseMatrix& A, double pivot_rel_tol = 1e-12);

// Symmetric rank-1 quasi-Newton update. Skipped (H returned unchanged) when
// |(y-Hs)'s| < skip_tol*||s||*||y-Hs||.
DenseMatrix sr1_update(const DenseMatrix& H, const Vector& step, const Vector& grad_diff,
                       double skip_tol = 1e-8);

class ObjectiveModel;

// Central-difference gradient check; returns the max per-coordinate error
// relative to max(1, |analytic|, |numeric|).
double fd_gradient_check(const ObjectiveModel& model, const Vector& x);

// Central finite differences of a gradient field; used for Hessian checks and
// as the finite_difference Hessian mode.
DenseMatrix fd_hessian(const std::function<Vector(const Vector&)>& grad, const Vector& x,
                       double rel_step = 1e-5);

}  // namespace mocont

#endif
