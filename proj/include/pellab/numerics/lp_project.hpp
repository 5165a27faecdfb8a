#pragma once

#include "pellab/common.hpp"

namespace pellab::numerics {

// Weighted discrete p-norm (sum_i w |u_i|^p)^(1/p) with uniform cell weight.
double lp_norm_weighted(const cvec& u, double p, double cell_volume);

// L^2(w)-orthogonal projection of u onto the closed unit ball of the
// weighted p-norm, p > 1. Interior points are returned unchanged; otherwise
// the result lies on the unit sphere (within 1e-8) and solves the
// one-multiplier KKT system, found by safeguarded bisection.
cvec project_lp_ball(const cvec& u, double p, double cell_volume);

}  // namespace pellab::numerics
