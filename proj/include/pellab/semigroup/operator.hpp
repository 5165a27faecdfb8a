#pragma once

#include "pellab/ellipticity/complex_matrix.hpp"
#include "pellab/numerics/sparse.hpp"
#include "pellab/semigroup/grid.hpp"

namespace pellab::semigroup {

// Assembled divergence-form operator e^{i phase} (-div(A grad .) + V) on a
// masked node grid. Axis-aligned second differences use arithmetic-mean face
// coefficients; in 2D the off-diagonal entries of A enter through forward
// cell differences so the quadratic form keeps the divergence structure.
struct DiscreteOperator {
    GridDomain domain;
    ellipticity::MatrixField A;
    rvec V;
    double phase;
    numerics::SparseComplexOperator matrix;
};

DiscreteOperator assemble(const GridDomain& domain, const ellipticity::MatrixField& A,
                          const rvec& V, double phase);

// Same ingredients with the potential removed (used by the heat-flow split).
DiscreteOperator without_potential(const DiscreteOperator& op);

// Crank-Nicolson propagation over n_steps uniform substeps; t = 0 returns f.
// Substep systems are solved to relative residual 1e-12 (direct factorization
// reused across steps when the dimension allows).
cvec semigroup_apply(const DiscreteOperator& L, const cvec& f, double t, int n_steps);

// Default substep count: max(16, ceil(t/h)).
int default_steps(const DiscreteOperator& L, double t);

// Solves (zeta - L) x = f. zeta must be a negative real or lie outside the
// closed sector of angle arctan(Lambda/lambda); for zeta = -s the discrete
// sectorial bound ||x|| <= ||f||/s is asserted on accretive assemblies.
cvec resolvent_apply(const DiscreteOperator& L, cxd zeta, const cvec& f);

// Discrete p-norm with cell-volume weights; p may be infinity.
double lp_norm(const cvec& f, double p, double cell_volume);
double lp_norm(const cvec& f, double p, const GridDomain& domain);

// Forward-difference gradient entries of v at one cell (Dirichlet ghosts are
// zero, Neumann ghosts mirror); returns |grad v|^2.
double grad_sq_at(const GridDomain& domain, const cvec& v, std::size_t cell);

// sqrt(|grad v|^2 + V |v|^2) per cell.
rvec energy_density(const DiscreteOperator& L, const cvec& v);

}  // namespace pellab::semigroup
