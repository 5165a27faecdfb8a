#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pellab/bellman/bellman.hpp"

namespace pellab::bellman {

enum class TauBranch { P2, Above, Below };

std::string to_string(TauBranch b);

// Pointwise convexity weight tau(sigma) with the proof-level quantities
// Gamma and D attached (meaningful for p > 2).
struct TauEstimate {
    double tau;
    TauBranch branch;
    double Gamma;
    double D;
};

TauEstimate tau_of(const BellmanPoint& sigma, const BellmanParams& params,
                   const ellipticity::ComplexMatrix& A, const ellipticity::ComplexMatrix& B);

// Admissible delta: half the threshold solving
//   lambda(A) Gamma(delta)/4 = [(2-q) Lambda(A,B)]^2,
// capped at 1/2; the returned value always satisfies the strict inequality
// with a factor-2 margin.
double choose_delta(double p, const ellipticity::ComplexMatrix& A,
                    const ellipticity::ComplexMatrix& B);
double choose_delta(double p, const ellipticity::MatrixField& A,
                    const ellipticity::MatrixField& B);

// Lower bounds for the convexity estimates implied by the branchwise proof:
// ratios H/(tau|w1|^2 + tau^-1|w2|^2) etc. are bounded below by these.
struct ConvexityTheory {
    double c_hess;
    double c_gz;
    double c_ge;
};

ConvexityTheory convexity_constants_theory(const BellmanParams& params,
                                           const ellipticity::ComplexMatrix& A,
                                           const ellipticity::ComplexMatrix& B);

struct BranchMinima {
    TauBranch branch;
    long count = 0;
    double c_hess = std::numeric_limits<double>::infinity();
    double c_gz = std::numeric_limits<double>::infinity();
    double c_ge = std::numeric_limits<double>::infinity();
    cxd worst_zeta{0.0, 0.0};  // argmin of the Hessian ratio
    cxd worst_eta{0.0, 0.0};
    std::uint64_t worst_index = 0;
};

struct ConvexityCertificate {
    std::uint64_t seed = 0;
    long n_samples = 0;
    double c_hess = std::numeric_limits<double>::infinity();
    double c_gz = std::numeric_limits<double>::infinity();
    double c_ge = std::numeric_limits<double>::infinity();
    cxd worst_zeta{0.0, 0.0};
    cxd worst_eta{0.0, 0.0};
    std::vector<BranchMinima> branches;
};

// Seeded sampling sweep over (sigma, omega) pairs off Upsilon, log-uniform
// magnitudes in [1e-3, 1e3]. Returns the minimal observed ratios; all three
// are > 0 exactly when the certified convexity holds on the sample. A few
// deterministic probes aligned with the worst p-ellipticity direction are
// appended so failures are found reliably. Deterministic per seed and
// independent of the number of threads.
ConvexityCertificate verify_convexity(const ellipticity::ComplexMatrix& A,
                                      const ellipticity::ComplexMatrix& B,
                                      const BellmanParams& params, long n_samples,
                                      std::uint64_t seed, int threads = 1);

// Mollified evaluations: convolution against the R^4 bump of scale kappa via
// tensor Gauss-Legendre quadrature with nodes_per_axis points per axis.
double mollified_Q(const BellmanPoint& sigma, const BellmanParams& params, double kappa,
                   int nodes_per_axis);

double mollified_hessian(const ellipticity::ComplexMatrix& A,
                         const ellipticity::ComplexMatrix& B, const BellmanPoint& sigma,
                         const HessianDirection& omega, const BellmanParams& params,
                         double kappa, int nodes_per_axis);

// (tau * phi_kappa)(sigma) and (tau^-1 * phi_kappa)(sigma).
std::pair<double, double> mollified_tau(const BellmanPoint& sigma, const BellmanParams& params,
                                        const ellipticity::ComplexMatrix& A,
                                        const ellipticity::ComplexMatrix& B, double kappa,
                                        int nodes_per_axis);

struct MollifiedCertificate {
    double min_ratio;  // min over samples of H_moll / (c_ref * weighted right side)
    double c_ref;
    cxd worst_zeta, worst_eta;
};

MollifiedCertificate mollified_certificate(const ellipticity::ComplexMatrix& A,
                                           const ellipticity::ComplexMatrix& B,
                                           const BellmanParams& params, double kappa,
                                           int nodes_per_axis, int n_points,
                                           std::uint64_t seed);

// Largest constant in  a x^2 - 2 b x y + c y^2 >= C (tau x^2 + tau^-1 y^2):
// (sqrt(ac) - |b|, sqrt(a/c)) when a, c > 0 and ac - b^2 > 0, empty otherwise.
std::optional<std::pair<double, double>> quadratic_gap(double a, double b, double c);

enum class ContractionKind { P, T, Sign };

// Normal contractions: P truncates radially to the unit disc, T takes the
// positive real part, Sign maps to the unit circle with sign(0) = 0.
cxd normal_contraction(ContractionKind kind, cxd z);

}  // namespace pellab::bellman
