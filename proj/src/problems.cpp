#include "mocont/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace mocont {

namespace {

class FunctionModel : public ObjectiveModel {
public:
    using ValueFn = std::function<double(const Vector&)>;
    using GradFn = std::function<Vector(const Vector&)>;
    using HessFn = std::function<DenseMatrix(const Vector&)>;

    FunctionModel(std::size_t n, ValueFn v, GradFn g, HessFn h)
        : n_(n), value_(std::move(v)), grad_(std::move(g)), hess_(std::move(h)) {}

    std::size_t dim() const override { return n_; }
    double value(const Vector& x) const override { return value_(x); }
    Vector gradient(const Vector& x) const override { return grad_(x); }
    DenseMatrix hessian(const Vector& x) const override { return hess_(x); }

private:
    std::size_t n_;
    ValueFn value_;
    GradFn grad_;
    HessFn hess_;
};

// f(x) = (x1+1)^2 + (x2-1)^4 - 0.5 (x2-1/4)^3
ModelPtr make_example1() {
    auto value = [](const Vector& x) {
        const double a = x[0] + 1.0, b = x[1] - 1.0, c = x[1] - 0.25;
        return a * a + b * b * b * b - 0.5 * c * c * c;
    };
    auto grad = [](const Vector& x) {
        const double b = x[1] - 1.0, c = x[1] - 0.25;
        return Vector{2.0 * (x[0] + 1.0), 4.0 * b * b * b - 1.5 * c * c};
    };
    auto hess = [](const Vector& x) {
        DenseMatrix H(2, 2, 0.0);
        const double b = x[1] - 1.0, c = x[1] - 0.25;
        H(0, 0) = 2.0;
        H(1, 1) = 12.0 * b * b - 3.0 * c;
        return H;
    };
    return std::make_shared<FunctionModel>(2, value, grad, hess);
}

// f(x) = (x1-2)^2 + (x2-1)^2 + (x3-1)^2
ModelPtr make_example2() {
    auto value = [](const Vector& x) {
        const double a = x[0] - 2.0, b = x[1] - 1.0, c = x[2] - 1.0;
        return a * a + b * b + c * c;
    };
    auto grad = [](const Vector& x) {
        return Vector{2.0 * (x[0] - 2.0), 2.0 * (x[1] - 1.0), 2.0 * (x[2] - 1.0)};
    };
    auto hess = [](const Vector&) {
        DenseMatrix H(3, 3, 0.0);
        H(0, 0) = H(1, 1) = H(2, 2) = 2.0;
        return H;
    };
    return std::make_shared<FunctionModel>(3, value, grad, hess);
}

// f(x) = (x1-2)^2 + (x2-1)^2 + 2 x1 x3
ModelPtr make_example3() {
    auto value = [](const Vector& x) {
        const double a = x[0] - 2.0, b = x[1] - 1.0;
        return a * a + b * b + 2.0 * x[0] * x[2];
    };
    auto grad = [](const Vector& x) {
        return Vector{2.0 * (x[0] - 2.0) + 2.0 * x[2], 2.0 * (x[1] - 1.0), 2.0 * x[0]};
    };
    auto hess = [](const Vector&) {
        DenseMatrix H(3, 3, 0.0);
        H(0, 0) = 2.0;
        H(1, 1) = 2.0;
        H(0, 2) = H(2, 0) = 2.0;
        return H;
    };
    return std::make_shared<FunctionModel>(3, value, grad, hess);
}

// f(x) = (x1-1/4)^2 + (x2-1/2)^2 + (x3-1)^4 - 0.5 (x3-1/4)^3
ModelPtr make_toy4_1() {
    auto value = [](const Vector& x) {
        const double a = x[0] - 0.25, b = x[1] - 0.5, c = x[2] - 1.0, d = x[2] - 0.25;
        return a * a + b * b + c * c * c * c - 0.5 * d * d * d;
    };
    auto grad = [](const Vector& x) {
        const double c = x[2] - 1.0, d = x[2] - 0.25;
        return Vector{2.0 * (x[0] - 0.25), 2.0 * (x[1] - 0.5), 4.0 * c * c * c - 1.5 * d * d};
    };
    auto hess = [](const Vector& x) {
        DenseMatrix H(3, 3, 0.0);
        const double c = x[2] - 1.0, d = x[2] - 0.25;
        H(0, 0) = 2.0;
        H(1, 1) = 2.0;
        H(2, 2) = 12.0 * c * c - 3.0 * d;
        return H;
    };
    return std::make_shared<FunctionModel>(3, value, grad, hess);
}

// f(x) = (x1-2.5)^2 + ((x2+1)^2 + (x3-1)^2 - 3)^2
ModelPtr make_split() {
    auto u = [](const Vector& x) {
        const double p = x[1] + 1.0, q = x[2] - 1.0;
        return p * p + q * q - 3.0;
    };
    auto value = [u](const Vector& x) {
        const double a = x[0] - 2.5;
        const double uu = u(x);
        return a * a + uu * uu;
    };
    auto grad = [u](const Vector& x) {
        const double uu = u(x);
        return Vector{2.0 * (x[0] - 2.5), 4.0 * uu * (x[1] + 1.0), 4.0 * uu * (x[2] - 1.0)};
    };
    auto hess = [u](const Vector& x) {
        const double uu = u(x);
        const double p = x[1] + 1.0, q = x[2] - 1.0;
        DenseMatrix H(3, 3, 0.0);
        H(0, 0) = 2.0;
        H(1, 1) = 8.0 * p * p + 4.0 * uu;
        H(2, 2) = 8.0 * q * q + 4.0 * uu;
        H(1, 2) = H(2, 1) = 8.0 * p * q;
        return H;
    };
    return std::make_shared<FunctionModel>(3, value, grad, hess);
}

// f(x) = (x1-a1)^4 + sum_{i>=2} (xi-ai)^2 with a1 = 1, ai seeded in [-1,1].
// Separable, so the Hessian accessors stay O(n).
class PolynomialModel : public ObjectiveModel {
public:
    PolynomialModel(std::size_t n, std::uint64_t seed) : a_(n) {
        a_[0] = 1.0;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        for (std::size_t i = 1; i < n; ++i) a_[i] = uni(rng);
    }

    std::size_t dim() const override { return a_.size(); }

    double value(const Vector& x) const override {
        const double d0 = x[0] - a_[0];
        double s = d0 * d0 * d0 * d0;
        for (std::size_t i = 1; i < a_.size(); ++i) {
            const double d = x[i] - a_[i];
            s += d * d;
        }
        return s;
    }

    Vector gradient(const Vector& x) const override {
        Vector g(a_.size());
        const double d0 = x[0] - a_[0];
        g[0] = 4.0 * d0 * d0 * d0;
        for (std::size_t i = 1; i < a_.size(); ++i) g[i] = 2.0 * (x[i] - a_[i]);
        return g;
    }

    DenseMatrix hessian(const Vector& x) const override {
        DenseMatrix H(a_.size(), a_.size(), 0.0);
        const double d0 = x[0] - a_[0];
        H(0, 0) = 12.0 * d0 * d0;
        for (std::size_t i = 1; i < a_.size(); ++i) H(i, i) = 2.0;
        return H;
    }

    Vector hessian_row(const Vector& x, std::size_t j) const override {
        Vector r(a_.size(), 0.0);
        if (j == 0) {
            const double d0 = x[0] - a_[0];
            r[0] = 12.0 * d0 * d0;
        } else {
            r[j] = 2.0;
        }
        return r;
    }

    DenseMatrix hessian_reduced(const Vector& x, const std::vector<std::size_t>& idx) const override {
        DenseMatrix H(idx.size(), idx.size(), 0.0);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (idx[k] == 0) {
                const double d0 = x[0] - a_[0];
                H(k, k) = 12.0 * d0 * d0;
            } else {
                H(k, k) = 2.0;
            }
        }
        return H;
    }

    const Vector& targets() const { return a_; }

private:
    Vector a_;
};

class LeastSquaresModel : public ObjectiveModel {
public:
    LeastSquaresModel(DenseMatrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
        if (b_.size() != A_.rows()) throw DimensionMismatch("least squares: rhs size");
        // constant Hessian 2 A'A
        H_ = DenseMatrix(A_.cols(), A_.cols(), 0.0);
        for (std::size_t i = 0; i < A_.cols(); ++i)
            for (std::size_t j = 0; j < A_.cols(); ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < A_.rows(); ++k) s += A_(k, i) * A_(k, j);
                H_(i, j) = 2.0 * s;
            }
    }

    std::size_t dim() const override { return A_.cols(); }

    double value(const Vector& x) const override {
        const Vector r = sub(matvec(A_, x), b_);
        return dot(r, r);
    }

    Vector gradient(const Vector& x) const override {
        const Vector r = sub(matvec(A_, x), b_);
        Vector g(A_.cols(), 0.0);
        for (std::size_t j = 0; j < A_.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < A_.rows(); ++k) s += A_(k, j) * r[k];
            g[j] = 2.0 * s;
        }
        return g;
    }

    DenseMatrix hessian(const Vector&) const override { return H_; }
    Vector hessian_row(const Vector&, std::size_t j) const override { return H_.row(j); }
    DenseMatrix hessian_reduced(const Vector&, const std::vector<std::size_t>& idx) const override {
        return H_.submatrix(idx, idx);
    }

private:
    DenseMatrix A_;
    Vector b_;
    DenseMatrix H_;
};

class QuadraticModel : public ObjectiveModel {
public:
    QuadraticModel(DenseMatrix Q, Vector c) : Q_(std::move(Q)), c_(std::move(c)) {}

    std::size_t dim() const override { return c_.size(); }

    double value(const Vector& x) const override {
        const Vector d = sub(x, c_);
        return dot(d, matvec(Q_, d));
    }

    Vector gradient(const Vector& x) const override {
        return scale(2.0, matvec(Q_, sub(x, c_)));
    }

    DenseMatrix hessian(const Vector&) const override {
        DenseMatrix H = Q_;
        for (auto& v : H.data()) v *= 2.0;
        return H;
    }

private:
    DenseMatrix Q_;
    Vector c_;
};

}  // namespace

ModelPtr make_paper_problem(const std::string& name, std::size_t dim, std::uint64_t seed) {
    if (name == "example1") return make_example1();
    if (name == "example2") return make_example2();
    if (name == "example3") return make_example3();
    if (name == "toy4_1") return make_toy4_1();
    if (name == "split") return make_split();
    if (name == "polynomial") {
        if (dim == 0) throw UnknownProblem("polynomial requires a dimension");
        return std::make_shared<PolynomialModel>(dim, seed);
    }
    throw UnknownProblem("unknown problem: " + name);
}

ModelPtr make_least_squares(const DenseMatrix& A, const Vector& b) {
    return std::make_shared<LeastSquaresModel>(A, b);
}

ModelPtr make_quadratic(const DenseMatrix& Q, const Vector& c) {
    return std::make_shared<QuadraticModel>(Q, c);
}

// ---------------------------------------------------------------------------
// Lorenz / SINDy
// ---------------------------------------------------------------------------

Vector lorenz_rhs(double sigma, double rho, double beta, const Vector& x) {
    return Vector{sigma * (x[1] - x[0]), x[0] * (rho - x[2]) - x[1], x[0] * x[1] - beta * x[2]};
}

TrajectoryData simulate_lorenz(double sigma, double rho, double beta, const Vector& x0, double dt,
                               std::size_t steps, double noise_rel, std::uint64_t seed) {
    if (dt <= 0.0) throw InconsistentData("simulate_lorenz: dt must be positive");
    TrajectoryData out;
    out.t.reserve(steps + 1);
    out.states.reserve(steps + 1);
    out.derivatives.reserve(steps + 1);

    Vector x = x0;
    auto rhs = [&](const Vector& z) { return lorenz_rhs(sigma, rho, beta, z); };
    for (std::size_t k = 0; k <= steps; ++k) {
        out.t.push_back(static_cast<double>(k) * dt);
        out.states.push_back(x);
        out.derivatives.push_back(rhs(x));
        if (k == steps) break;
        const Vector k1 = rhs(x);
        const Vector k2 = rhs(axpy(0.5 * dt, k1, x));
        const Vector k3 = rhs(axpy(0.5 * dt, k2, x));
        const Vector k4 = rhs(axpy(dt, k3, x));
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    if (noise_rel > 0.0) {
        const std::size_t m = x0.size();
        Vector mean(m, 0.0), sdev(m, 0.0);
        for (const auto& s : out.states)
            for (std::size_t i = 0; i < m; ++i) mean[i] += s[i];
        for (auto& v : mean) v /= static_cast<double>(out.states.size());
        for (const auto& s : out.states)
            for (std::size_t i = 0; i < m; ++i) sdev[i] += (s[i] - mean[i]) * (s[i] - mean[i]);
        for (auto& v : sdev) v = std::sqrt(v / static_cast<double>(out.states.size()));

        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto& s : out.states)
            for (std::size_t i = 0; i < m; ++i) s[i] += noise_rel * sdev[i] * gauss(rng);
        out.derivatives.clear();  // noisy states invalidate the exact derivatives
    }
    return out;
}

std::size_t monomial_count(std::size_t states, unsigned order) {
    // C(states + order, order)
    std::size_t num = 1, den = 1;
    for (unsigned k = 1; k <= order; ++k) {
        num *= states + k;
        den *= k;
    }
    return num / den;
}

namespace {

void enumerate_monomials(std::size_t m, unsigned order, std::vector<std::vector<unsigned>>& out) {
    // graded-lexicographic: by total degree, then lexicographic in exponents
    std::vector<unsigned> expo(m, 0);
    for (unsigned deg = 0; deg <= order; ++deg) {
        // enumerate all exponent vectors with sum == deg, lexicographically
        std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned left) {
            if (pos + 1 == m) {
                expo[pos] = left;
                out.push_back(expo);
                return;
            }
            for (unsigned e = left + 1; e-- > 0;) {
                expo[pos] = left - e;
                rec(pos + 1, e);
            }
        };
        // lexicographic ascending in the first variable's exponent
        std::function<void(std::size_t, unsigned)> rec_lex = [&](std::size_t pos, unsigned left) {
            if (pos + 1 == m) {
                expo[pos] = left;
                out.push_back(expo);
                return;
            }
            for (unsigned e = 0; e <= left; ++e) {
                expo[pos] = e;
                rec_lex(pos + 1, left - e);
            }
        };
        rec_lex(0, deg);
    }
}

double eval_monomial(const std::vector<unsigned>& expo, const Vector& x) {
    double v = 1.0;
    for (std::size_t i = 0; i < expo.size(); ++i)
        for (unsigned k = 0; k < expo[i]; ++k) v *= x[i];
    return v;
}

// Objective (1/(m c N)) sum_i ||W' theta(x_i) - xdot_i||^2 over vec(W).
// vec(W) layout: column k of W (the weights for state k) occupies entries
// [k*c, (k+1)*c). Quadratic with a constant block-diagonal Hessian.
class SindyModel : public ObjectiveModel {
public:
    SindyModel(DenseMatrix theta, std::vector<Vector> targets, std::size_t m, std::size_t c)
        : theta_(std::move(theta)), targets_(std::move(targets)), m_(m), c_(c) {
        N_ = theta_.rows();
        scale_ = 1.0 / (static_cast<double>(m_) * static_cast<double>(c_) * static_cast<double>(N_));
        // block Hessian 2*scale * theta' theta, shared by every state block
        block_ = DenseMatrix(c_, c_, 0.0);
        for (std::size_t i = 0; i < c_; ++i)
            for (std::size_t j = 0; j < c_; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < N_; ++k) s += theta_(k, i) * theta_(k, j);
                block_(i, j) = 2.0 * scale_ * s;
            }
    }

    std::size_t dim() const override { return m_ * c_; }

    double value(const Vector& w) const override {
        double total = 0.0;
        for (std::size_t k = 0; k < m_; ++k) {
            for (std::size_t i = 0; i < N_; ++i) {
                double pred = 0.0;
                for (std::size_t j = 0; j < c_; ++j) pred += theta_(i, j) * w[k * c_ + j];
                const double r = pred - targets_[k][i];
                total += r * r;
            }
        }
        return scale_ * total;
    }

    Vector gradient(const Vector& w) const override {
        Vector g(dim(), 0.0);
        for (std::size_t k = 0; k < m_; ++k) {
            Vector resid(N_);
            for (std::size_t i = 0; i < N_; ++i) {
                double pred = 0.0;
                for (std::size_t j = 0; j < c_; ++j) pred += theta_(i, j) * w[k * c_ + j];
                resid[i] = pred - targets_[k][i];
            }
            for (std::size_t j = 0; j < c_; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < N_; ++i) s += theta_(i, j) * resid[i];
                g[k * c_ + j] = 2.0 * scale_ * s;
            }
        }
        return g;
    }

    DenseMatrix hessian(const Vector&) const override {
        DenseMatrix H(dim(), dim(), 0.0);
        for (std::size_t k = 0; k < m_; ++k)
            for (std::size_t i = 0; i < c_; ++i)
                for (std::size_t j = 0; j < c_; ++j) H(k * c_ + i, k * c_ + j) = block_(i, j);
        return H;
    }

    Vector hessian_row(const Vector&, std::size_t r) const override {
        Vector row(dim(), 0.0);
        const std::size_t k = r / c_, i = r % c_;
        for (std::size_t j = 0; j < c_; ++j) row[k * c_ + j] = block_(i, j);
        return row;
    }

    DenseMatrix hessian_reduced(const Vector&, const std::vector<std::size_t>& idx) const override {
        DenseMatrix H(idx.size(), idx.size(), 0.0);
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) {
                const std::size_t ka = idx[a] / c_, kb = idx[b] / c_;
                if (ka == kb) H(a, b) = block_(idx[a] % c_, idx[b] % c_);
            }
        return H;
    }

private:
    DenseMatrix theta_;
    std::vector<Vector> targets_;
    std::size_t m_, c_, N_ = 0;
    double scale_ = 0.0;
    DenseMatrix block_;
};

}  // namespace

SindyProblem build_sindy(const TrajectoryData& data, unsigned poly_order) {
    if (data.states.empty()) throw InconsistentData("build_sindy: no samples");
    const std::size_t m = data.states.front().size();
    for (const auto& s : data.states)
        if (s.size() != m) throw InconsistentData("build_sindy: inconsistent state dimension");

    std::vector<Vector> xs;
    std::vector<Vector> xdots;
    if (!data.derivatives.empty()) {
        if (data.derivatives.size() != data.states.size())
            throw InconsistentData("build_sindy: derivative count mismatch");
        xs = data.states;
        xdots = data.derivatives;
    } else {
        // central differences on the uniform grid; endpoints dropped
        if (data.states.size() < 3) throw InconsistentData("build_sindy: too few samples");
        if (data.t.size() != data.states.size())
            throw InconsistentData("build_sindy: time grid size mismatch");
        const double dt = data.t[1] - data.t[0];
        for (std::size_t i = 1; i + 1 < data.states.size(); ++i) {
            xs.push_back(data.states[i]);
            Vector d(m);
            for (std::size_t j = 0; j < m; ++j)
                d[j] = (data.states[i + 1][j] - data.states[i - 1][j]) / (2.0 * dt);
            xdots.push_back(d);
        }
    }

    SindyProblem p;
    p.states = m;
    p.samples = xs.size();
    enumerate_monomials(m, poly_order, p.exponents);
    p.basis_size = p.exponents.size();

    p.theta = DenseMatrix(p.samples, p.basis_size);
    for (std::size_t i = 0; i < p.samples; ++i)
        for (std::size_t j = 0; j < p.basis_size; ++j)
            p.theta(i, j) = eval_monomial(p.exponents[j], xs[i]);

    p.targets.assign(m, Vector(p.samples));
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < p.samples; ++i) p.targets[k][i] = xdots[i][k];

    p.model = std::make_shared<SindyModel>(p.theta, p.targets, m, p.basis_size);
    return p;
}

// ---------------------------------------------------------------------------
// Dataset / MLP
// ---------------------------------------------------------------------------

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open dataset: " + path);
    Dataset d;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() < 2) throw MalformedInput("dataset row needs features and a label");
        const int label = static_cast<int>(vals.back());
        vals.pop_back();
        if (!d.features.empty() && vals.size() != d.features.front().size())
            throw MalformedInput("dataset rows have inconsistent widths");
        d.features.push_back(vals);
        d.labels.push_back(label);
        d.classes = std::max(d.classes, static_cast<std::size_t>(label) + 1);
    }
    return d;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction,
                                          std::uint64_t seed) {
    std::vector<std::size_t> idx(d.features.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    const std::size_t n_train =
        static_cast<std::size_t>(train_fraction * static_cast<double>(idx.size()));
    Dataset train, test;
    train.classes = test.classes = d.classes;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        Dataset& tgt = (i < n_train) ? train : test;
        tgt.features.push_back(d.features[idx[i]]);
        tgt.labels.push_back(d.labels[idx[i]]);
    }
    return {train, test};
}

std::size_t mlp_weight_count(const std::vector<std::size_t>& layer_widths) {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < layer_widths.size(); ++l)
        n += (layer_widths[l] + 1) * layer_widths[l + 1];
    return n;
}

MlpProblem::MlpProblem(MlpSpec spec, Dataset data) : spec_(std::move(spec)), data_(std::move(data)) {
    if (spec_.layer_widths.size() < 2) throw ShapeMismatch("mlp needs at least two layers");
    if (!data_.features.empty() && data_.features.front().size() != spec_.layer_widths.front())
        throw ShapeMismatch("mlp input width does not match dataset");
    if (data_.classes > spec_.layer_widths.back())
        throw ShapeMismatch("mlp output width smaller than class count");
    n_weights_ = mlp_weight_count(spec_.layer_widths);
}

namespace {

double act_eval(Activation a, double z) {
    switch (a) {
        case Activation::tanh_act: return std::tanh(z);
        case Activation::softplus: return z > 30.0 ? z : std::log1p(std::exp(z));
    }
    return 0.0;
}

double act_deriv(Activation a, double z) {
    switch (a) {
        case Activation::tanh_act: {
            const double t = std::tanh(z);
            return 1.0 - t * t;
        }
        case Activation::softplus: return 1.0 / (1.0 + std::exp(-z));
    }
    return 0.0;
}

Vector softmax(const Vector& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    Vector p(z.size());
    double s = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        p[i] = std::exp(z[i] - zmax);
        s += p[i];
    }
    for (auto& v : p) v /= s;
    return p;
}

}  // namespace

Vector MlpProblem::predict(const Vector& w, const Vector& x) const {
    const auto& L = spec_.layer_widths;
    Vector z = x;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < L.size(); ++l) {
        const std::size_t in = L[l], out = L[l + 1];
        Vector pre(out);
        for (std::size_t o = 0; o < out; ++o) {
            double s = w[off + o];  // bias block first
            const std::size_t wbase = off + out + o * in;
            for (std::size_t i = 0; i < in; ++i) s += w[wbase + i] * z[i];
            pre[o] = s;
        }
        off += out + out * in;
        if (l + 2 < L.size()) {
            for (std::size_t o = 0; o < out; ++o) pre[o] = act_eval(spec_.activation, pre[o]);
            z = std::move(pre);
        } else {
            return softmax(pre);
        }
    }
    return z;
}

double MlpProblem::value(const Vector& w) const {
    const auto& L = spec_.layer_widths;
    const std::size_t N = data_.features.size();
    double loss = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        Vector p = predict(w, data_.features[n]);
        const double q = std::max(p[static_cast<std::size_t>(data_.labels[n])], 1e-300);
        loss -= std::log(q);
    }
    (void)L;
    return loss / static_cast<double>(N);
}

Vector MlpProblem::gradient(const Vector& w) const {
    const auto& L = spec_.layer_widths;
    const std::size_t layers = L.size() - 1;
    const std::size_t N = data_.features.size();
    Vector g(n_weights_, 0.0);

    std::vector<std::size_t> offsets(layers);
    {
        std::size_t off = 0;
        for (std::size_t l = 0; l < layers; ++l) {
            offsets[l] = off;
            off += L[l + 1] + L[l + 1] * L[l];
        }
    }

    for (std::size_t n = 0; n < N; ++n) {
        // forward pass, keeping pre-activations and layer outputs
        std::vector<Vector> outs(layers + 1);
        std::vector<Vector> pres(layers);
        outs[0] = data_.features[n];
        for (std::size_t l = 0; l < layers; ++l) {
            const std::size_t in = L[l], out = L[l + 1];
            pres[l].assign(out, 0.0);
            for (std::size_t o = 0; o < out; ++o) {
                double s = w[offsets[l] + o];
                const std::size_t wbase = offsets[l] + out + o * in;
                for (std::size_t i = 0; i < in; ++i) s += w[wbase + i] * outs[l][i];
                pres[l][o] = s;
            }
            if (l + 1 < layers) {
                outs[l + 1].assign(out, 0.0);
                for (std::size_t o = 0; o < out; ++o)
                    outs[l + 1][o] = act_eval(spec_.activation, pres[l][o]);
            } else {
                outs[l + 1] = softmax(pres[l]);
            }
        }

        // backward pass
        Vector delta = outs[layers];  // p - y
        delta[static_cast<std::size_t>(data_.labels[n])] -= 1.0;
        for (std::size_t li = layers; li-- > 0;) {
            const std::size_t in = L[li], out = L[li + 1];
            for (std::size_t o = 0; o < out; ++o) {
                g[offsets[li] + o] += delta[o];
                const std::size_t wbase = offsets[li] + out + o * in;
                for (std::size_t i = 0; i < in; ++i) g[wbase + i] += delta[o] * outs[li][i];
            }
            if (li == 0) break;
            Vector prev(in, 0.0);
            for (std::size_t i = 0; i < in; ++i) {
                double s = 0.0;
                for (std::size_t o = 0; o < out; ++o)
                    s += w[offsets[li] + out + o * in + i] * delta[o];
                prev[i] = s * act_deriv(spec_.activation, pres[li - 1][i]);
            }
            delta = std::move(prev);
        }
    }
    const double inv = 1.0 / static_cast<double>(N);
    for (auto& v : g) v *= inv;
    return g;
}

DenseMatrix MlpProblem::hessian(const Vector& w) const {
    return fd_hessian([this](const Vector& z) { return gradient(z); }, w, 1e-5);
}

double MlpProblem::misclassification_rate(const Vector& w, const Dataset& d) const {
    if (d.features.empty()) return 0.0;
    std::size_t wrong = 0;
    for (std::size_t n = 0; n < d.features.size(); ++n) {
        const Vector p = predict(w, d.features[n]);
        const auto arg =
            std::distance(p.begin(), std::max_element(p.begin(), p.end()));
        if (arg != d.labels[n]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(d.features.size());
}

}  // namespace mocont
