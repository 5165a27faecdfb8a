#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pellab {

using cxd = std::complex<double>;
using cvec = std::vector<cxd>;
using rvec = std::vector<double>;

// Error taxonomy. Structural errors are malformed inputs (shape, labels),
// parameter errors are out-of-range scalars, precondition errors are
// violated mathematical assumptions detected at runtime.
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an iterative solver fails; carries the best residual reached.
struct SolverError : std::runtime_error {
    double achieved_residual;
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), achieved_residual(residual) {}
};

// |f| vanishes where a p < 2 power would be singular.
struct SingularityError : std::runtime_error {
    std::vector<std::size_t> cells;
    SingularityError(const std::string& what, std::vector<std::size_t> where)
        : std::runtime_error(what), cells(std::move(where)) {}
};

// Evaluation requested on the exceptional set where the function is not C^2.
struct RegionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double sqr(double x) { return x * x; }

inline double abs2(cxd z) { return z.real() * z.real() + z.imag() * z.imag(); }

// sign(0) = 0 convention.
inline cxd csign(cxd z) {
    const double m = std::abs(z);
    return m == 0.0 ? cxd(0.0, 0.0) : z / m;
}

// All numeric CLI/CSV output uses 17 significant digits.
std::string fmt17(double x);

}  // namespace pellab
