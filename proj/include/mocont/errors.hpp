#ifndef MOCONT_ERRORS_HPP
#define MOCONT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mocont {

// Error hierarchy. These signal contract violations or structural failures
// (singular systems, dimension mismatches). Expected outcomes like a
// non-converged corrector are reported through result structs instead.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& msg = "singular matrix") : Error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg = "dimension mismatch") : Error(msg) {}
};

struct EmptyActiveSet : Error {
    explicit EmptyActiveSet(const std::string& msg = "empty active set") : Error(msg) {}
};

struct TooManyInactive : Error {
    explicit TooManyInactive(const std::string& msg = "too many inactive indices") : Error(msg) {}
};

struct TooManyPotentiallyActive : Error {
    explicit TooManyPotentiallyActive(const std::string& msg = "too many potentially active indices")
        : Error(msg) {}
};

struct UnknownProblem : Error {
    explicit UnknownProblem(const std::string& msg = "unknown problem") : Error(msg) {}
};

struct InconsistentData : Error {
    explicit InconsistentData(const std::string& msg = "inconsistent data") : Error(msg) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& msg = "shape mismatch") : Error(msg) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg = "budget exceeded") : Error(msg) {}
};

struct ZeroDirection : Error {
    explicit ZeroDirection(const std::string& msg = "zero direction") : Error(msg) {}
};

struct ZeroDeterminant : Error {
    explicit ZeroDeterminant(const std::string& msg = "zero determinant") : Error(msg) {}
};

struct MalformedInput : Error {
    explicit MalformedInput(const std::string& msg = "malformed input") : Error(msg) {}
};

}  // namespace mocont

#endif
