#pragma once

#include <array>
#include <utility>

#include "pellab/ellipticity/complex_matrix.hpp"

namespace pellab::bellman {

// Exponent pair p >= 2, q = p/(p-1) and the convexifying weight delta.
struct BellmanParams {
    double p;
    double q;
    double delta;

    BellmanParams(double p_in, double delta_in);
};

enum class Region { BelowDiag, AboveDiag, OnUpsilon };

// A point sigma = (zeta, eta) in C^2 classified against the exceptional set
// Upsilon = { eta = 0 } union { |zeta|^p = |eta|^q }.
struct BellmanPoint {
    cxd zeta;
    cxd eta;
    Region region;
};

BellmanPoint classify(cxd zeta, cxd eta, const BellmanParams& params);

// The piecewise Bellman function
//   Q(zeta,eta) = |zeta|^p + |eta|^q + delta * { |zeta|^2 |eta|^{2-q}      below
//                                              { (2/p)|zeta|^p + (2/q-1)|eta|^q  above.
// On the gluing surface both branches are evaluated and must agree to 1e-12
// relative; the value is continuous everywhere.
double Q_eval(const BellmanPoint& sigma, const BellmanParams& params);
double Q_eval(cxd zeta, cxd eta, const BellmanParams& params);

// Radial derivative products Re((d_zeta Q) zeta) and Re((d_eta Q) eta).
// Both are automatically real for this radial Q. Throws RegionError on Upsilon.
std::pair<double, double> Q_gradient_products(const BellmanPoint& sigma,
                                              const BellmanParams& params);

// Wirtinger derivatives (d_zeta Q, d_eta Q). The forced variant picks the
// branch by the >=/< comparison and is safe on Upsilon (Q is C^1 there).
std::pair<cxd, cxd> Q_wirtinger(const BellmanPoint& sigma, const BellmanParams& params);
std::pair<cxd, cxd> Q_wirtinger_forced(cxd zeta, cxd eta, const BellmanParams& params);

// Analytic 4x4 Hessian of the pullback Q_W at W(sigma), assembled branchwise.
// Row/column order follows W: (Re zeta, Im zeta, Re eta, Im eta).
std::array<std::array<double, 4>, 4> Q_hessian4(const BellmanPoint& sigma,
                                                const BellmanParams& params);

// Finite-difference counterpart used to validate the analytic assembly.
std::array<std::array<double, 4>, 4> Q_hessian4_fd(cxd zeta, cxd eta,
                                                   const BellmanParams& params, double step);

// Hessian action of F_p(zeta) = |zeta|^p on a direction vector, applied per
// component: (p^2/2)|zeta|^{p-2} sign(zeta) I_p(conj(sign zeta) xi).
cvec hessian_Fp(cxd zeta, const cvec& xi, double p);

struct HessianDirection {
    cvec omega1;
    cvec omega2;
};

// Generalized Hessian H_Q^{(A,B)}[sigma; omega]: the 4x4 Hessian of Q_W
// contracted against per-component directions w_j = (Re w1_j, Im w1_j,
// Re w2_j, Im w2_j) and their matrix-twisted images built from (A w1, B w2).
double generalized_hessian(const ellipticity::ComplexMatrix& A,
                           const ellipticity::ComplexMatrix& B, const BellmanPoint& sigma,
                           const HessianDirection& omega, const BellmanParams& params);

// Discrete check of the chain-rule identity
//   grad(|f|^{p-2} f) = (p/2)|f|^{p-2} sign(f) I_p(conj(sign f) grad f)
// on a uniform 1D grid with one-sided differences. Returns the maximum
// face residual relative to the largest right-hand side magnitude; O(h)
// for smooth nonvanishing samples.
double grad_power_identity(const cvec& f, double h, double p);

}  // namespace pellab::bellman
