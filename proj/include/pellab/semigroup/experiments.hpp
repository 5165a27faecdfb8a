#pragma once

#include <cstdint>

#include "pellab/bellman/bellman.hpp"
#include "pellab/semigroup/operator.hpp"

namespace pellab::semigroup {

// Geometric time grid t_k = t_min * rho^k. t_min <= 0 means "use h^2".
// Marching stops once the last decade contributes less than tail_fraction
// of the running integral (or at the caps).
struct TimeGridSpec {
    double t_min = 0.0;
    double rho = 1.25;
    double t_cap = 50.0;
    int max_points = 20000;
    double tail_fraction = 0.01;
};

// Max over trials and times of ||T_t f||_p / ||f||_p. Random complex data,
// deterministic per seed. Real-coefficient assemblies are stepped inside the
// positivity limit so the discrete evolution is sub-Markovian.
double contractivity_experiment(const DiscreteOperator& L, double p, double phase,
                                const rvec& t_list, int n_trials, std::uint64_t seed);

// Min over trials of Re <L u, |u|^{p-2} u>_h for unit-l2 random fields plus a
// probe aligned with the worst p-ellipticity direction of the coefficient.
double dissipativity_check(const DiscreteOperator& L, double p, int n_trials,
                           std::uint64_t seed);

struct EmbeddingReport {
    double value = 0.0;
    double fp_norm = 0.0;
    double gq_norm = 0.0;
    double ratio = 0.0;
    double T_max = 0.0;
    double tail_estimate = 0.0;
};

// Time integral of  sum_cells sqrt(|grad v|^2 + V|v|^2) sqrt(|grad w|^2 + W|w|^2)
// along the two flows v = T_t^{A,V} f, w = T_t^{B,W} g, trapezoid rule on the
// geometric grid.
EmbeddingReport bilinear_embedding(const DiscreteOperator& LA, const DiscreteOperator& LB,
                                   const cvec& f, const cvec& g, double p,
                                   const TimeGridSpec& grid = {});

struct FlowTrace {
    rvec times;
    rvec E;
    rvec dE_numeric;       // central differences; endpoints NaN
    rvec I1;
    rvec I2;
    rvec integrand_lower;  // the bilinear integrand at each time
    long upsilon_hits = 0; // cells evaluated by the one-sided branch
};

// Samples E(t) = sum_cells Q(v, w) and its derivative decomposition
// -E' = I1 + I2 (gradient and potential terms) along the geometric grid.
// Requires phase 0 on both operators.
FlowTrace flow_trace(const DiscreteOperator& LA, const DiscreteOperator& LB, const cvec& f,
                     const cvec& g, const bellman::BellmanParams& params,
                     const TimeGridSpec& grid = {});

struct TruncationTable {
    rvec n;
    rvec e_grad;
    rvec e_pot;
};

// Resolvent truncation study: u_n = (s + L_{min(V,n)})^{-1} f against the
// untruncated potential; gradient and potential-weighted errors per n.
TruncationTable truncation_convergence(const GridDomain& domain,
                                       const ellipticity::MatrixField& A,
                                       const rvec& V_unbounded, double s, const cvec& f,
                                       const rvec& n_list);

// Projects random fields extended by the Dirichlet ghost zeros and checks
// the zeros survive projection exactly (discrete form-domain invariance).
bool lp_ball_invariance_probe(const DiscreteOperator& L, double p, int n_trials,
                              std::uint64_t seed);

}  // namespace pellab::semigroup
