#ifndef MOCONT_PROBLEMS_HPP
#define MOCONT_PROBLEMS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mocont/objective.hpp"

namespace mocont {

// ---------------------------------------------------------------------------
// Built-in analytic test problems
// ---------------------------------------------------------------------------

// name in {example1, example2, example3, toy4_1, polynomial, split}.
// polynomial takes its dimension and the seed for the random targets
// a_i in [-1,1] (a_1 = 1 fixed).
ModelPtr make_paper_problem(const std::string& name, std::size_t dim = 0, std::uint64_t seed = 0);

// f(x) = ||Ax - b||_2^2; used by the homotopy comparisons.
ModelPtr make_least_squares(const DenseMatrix& A, const Vector& b);

// f(x) = (x-c)' Q (x-c) with symmetric positive definite Q.
ModelPtr make_quadratic(const DenseMatrix& Q, const Vector& c);

// ---------------------------------------------------------------------------
// SINDy
// ---------------------------------------------------------------------------

struct TrajectoryData {
    std::vector<double> t;
    std::vector<Vector> states;       // x(t_i), each of dimension m
    std::vector<Vector> derivatives;  // xdot(t_i); may be empty (estimated then)
};

// Fixed-step RK4 integration of the Lorenz system. noise_rel > 0 adds seeded
// white noise to the recorded states, scaled per channel by its std dev.
TrajectoryData simulate_lorenz(double sigma, double rho, double beta, const Vector& x0, double dt,
                               std::size_t steps, double noise_rel = 0.0, std::uint64_t seed = 0);

Vector lorenz_rhs(double sigma, double rho, double beta, const Vector& x);

struct SindyProblem {
    std::size_t states = 0;      // m
    std::size_t basis_size = 0;  // c, monomials up to poly_order in graded-lex order
    std::size_t samples = 0;     // N
    std::vector<std::vector<unsigned>> exponents;  // per basis function, length m
    DenseMatrix theta;                             // N x c design matrix
    std::vector<Vector> targets;                   // per state: N derivative samples
    ModelPtr model;                                // objective over vec(W), dimension c*m
};

// Dictionary of monomials up to poly_order (constant first, graded-lex). If
// the trajectory carries no derivatives they are estimated by central
// differences on the uniform time grid (endpoints dropped).
SindyProblem build_sindy(const TrajectoryData& data, unsigned poly_order);

std::size_t monomial_count(std::size_t states, unsigned order);

// ---------------------------------------------------------------------------
// Feed-forward MLP with softmax output and mean cross-entropy loss
// ---------------------------------------------------------------------------

struct Dataset {
    std::vector<Vector> features;
    std::vector<int> labels;  // 0-based class ids
    std::size_t classes = 0;
};

Dataset load_dataset_csv(const std::string& path);

// Seeded random split without stratification; returns {train, test}.
std::pair<Dataset, Dataset> split_dataset(const Dataset& d, double train_fraction,
                                          std::uint64_t seed);

enum class Activation { tanh_act, softplus };

struct MlpSpec {
    std::vector<std::size_t> layer_widths;  // input, hidden..., output
    Activation activation = Activation::tanh_act;
};

// Weight vector layout: per layer, bias entries (length = out width) followed
// by the weight matrix row-major (out x in). Gradient is computed by reverse
// accumulation; the Hessian by central differences of the gradient.
class MlpProblem : public ObjectiveModel {
public:
    MlpProblem(MlpSpec spec, Dataset data);

    std::size_t dim() const override { return n_weights_; }
    double value(const Vector& w) const override;
    Vector gradient(const Vector& w) const override;
    DenseMatrix hessian(const Vector& w) const override;

    // Softmax class probabilities for one sample.
    Vector predict(const Vector& w, const Vector& x) const;
    double misclassification_rate(const Vector& w, const Dataset& d) const;

    const MlpSpec& spec() const { return spec_; }
    const Dataset& data() const { return data_; }

private:
    MlpSpec spec_;
    Dataset data_;
    std::size_t n_weights_ = 0;
};

std::size_t mlp_weight_count(const std::vector<std::size_t>& layer_widths);

}  // namespace mocont

#endif
