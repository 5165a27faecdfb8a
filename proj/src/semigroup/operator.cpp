#include "pellab/semigroup/operator.hpp"

#include <cmath>
#include <memory>

#include "pellab/ellipticity/constants.hpp"

namespace pellab::semigroup {

using numerics::SparseComplexOperator;
using Triplet = SparseComplexOperator::Triplet;

DiscreteOperator assemble(const GridDomain& domain, const ellipticity::MatrixField& A,
                          const rvec& V, double phase) {
    const std::size_t n = domain.n_cells();
    if (A.n_cells() != n) throw StructuralError("assemble: field does not match grid");
    if (A.dim() != domain.space_dim())
        throw StructuralError("assemble: matrix dimension does not match space dimension");
    if (V.size() != n) throw StructuralError("assemble: potential does not match grid");
    {
        std::string bad;
        for (std::size_t c = 0; c < n; ++c)
            if (V[c] < 0.0) bad += (bad.empty() ? "" : ",") + std::to_string(c);
        if (!bad.empty())
            throw PreconditionError("assemble: negative potential at cells " + bad);
    }

    const double h = domain.h();
    const double inv_h2 = 1.0 / (h * h);
    std::vector<Triplet> trip;
    trip.reserve(6 * n);

    // Axis-aligned fluxes with arithmetic-mean face coefficients.
    for (std::size_t c = 0; c < n; ++c) {
        for (int axis = 0; axis < domain.space_dim(); ++axis) {
            const int ic = static_cast<int>(c);
            if (const auto nb = domain.neighbor(c, axis, +1)) {
                const cxd face = 0.5 * (A.at(c)(axis, axis) + A.at(*nb)(axis, axis)) * inv_h2;
                const int in = static_cast<int>(*nb);
                trip.push_back({ic, ic, face});
                trip.push_back({ic, in, -face});
                trip.push_back({in, in, face});
                trip.push_back({in, ic, -face});
            } else if (domain.boundary_label(c, axis, +1) == FaceLabel::Dirichlet) {
                trip.push_back({ic, ic, A.at(c)(axis, axis) * inv_h2});
            }
            if (!domain.neighbor(c, axis, -1) &&
                domain.boundary_label(c, axis, -1) == FaceLabel::Dirichlet) {
                trip.push_back({ic, ic, A.at(c)(axis, axis) * inv_h2});
            }
        }
    }

    // Off-diagonal coefficients: cell-based forward differences
    //   sum_c A_xy (D_y u)(conj D_x v) + A_yx (D_x u)(conj D_y v).
    if (domain.space_dim() == 2) {
        // Column entries of the forward difference D_a u at cell c:
        // active neighbor -> {(nb,+1),(c,-1)}, Dirichlet ghost -> {(c,-1)},
        // Neumann ghost -> {} (mirror).
        const auto diff_cols = [&](std::size_t c, int axis) {
            std::vector<std::pair<int, double>> cols;
            if (const auto nb = domain.neighbor(c, axis, +1)) {
                cols.push_back({static_cast<int>(*nb), 1.0});
                cols.push_back({static_cast<int>(c), -1.0});
            } else if (domain.boundary_label(c, axis, +1) == FaceLabel::Dirichlet) {
                cols.push_back({static_cast<int>(c), -1.0});
            }
            return cols;
        };
        for (std::size_t c = 0; c < n; ++c) {
            const cxd axy = A.at(c)(0, 1);
            const cxd ayx = A.at(c)(1, 0);
            if (axy == cxd(0.0, 0.0) && ayx == cxd(0.0, 0.0)) continue;
            const auto dx = diff_cols(c, 0);
            const auto dy = diff_cols(c, 1);
            // A_xy (D_y u)(conj D_x v): rows from D_x, columns from D_y.
            for (const auto& [row, rs] : dx)
                for (const auto& [col, cs] : dy)
                    trip.push_back({row, col, axy * rs * cs * inv_h2});
            for (const auto& [row, rs] : dy)
                for (const auto& [col, cs] : dx)
                    trip.push_back({row, col, ayx * rs * cs * inv_h2});
        }
    }

    for (std::size_t c = 0; c < n; ++c)
        if (V[c] != 0.0) trip.push_back({static_cast<int>(c), static_cast<int>(c), cxd(V[c], 0.0)});

    const cxd rot(std::cos(phase), std::sin(phase));
    for (auto& t : trip) t.value *= rot;

    return {domain, A, V, phase, SparseComplexOperator(static_cast<int>(n), std::move(trip))};
}

DiscreteOperator without_potential(const DiscreteOperator& op) {
    return assemble(op.domain, op.A, rvec(op.domain.n_cells(), 0.0), op.phase);
}

int default_steps(const DiscreteOperator& L, double t) {
    return std::max(16, static_cast<int>(std::ceil(t / L.domain.h())));
}

cvec semigroup_apply(const DiscreteOperator& L, const cvec& f, double t, int n_steps) {
    if (t < 0.0) throw ParameterError("semigroup_apply: t must be >= 0");
    if (n_steps < 1) throw ParameterError("semigroup_apply: n_steps must be >= 1");
    if (static_cast<int>(f.size()) != L.matrix.dim())
        throw StructuralError("semigroup_apply: field size mismatch");
    if (t == 0.0) return f;

    const double dt = t / n_steps;
    const SparseComplexOperator forward = L.matrix.scaled(cxd(-0.5 * dt, 0.0)).shifted(1.0);
    const SparseComplexOperator backward = L.matrix.scaled(cxd(0.5 * dt, 0.0)).shifted(1.0);

    // The backward matrix is fixed across substeps; factor once when small.
    const bool direct = backward.dim() <= 2000;
    std::unique_ptr<numerics::DenseLu> lu;
    if (direct) lu = std::make_unique<numerics::DenseLu>(backward);

    cvec u = f;
    for (int s = 0; s < n_steps; ++s) {
        const cvec rhs = forward.apply(u);
        if (direct) {
            u = lu->solve(rhs);
            // One refinement round keeps the step residual at solver tolerance.
            cvec r = backward.apply(u);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
            const double rel = numerics::norm2(r) / std::max(numerics::norm2(rhs), 1e-300);
            if (rel > 1e-12) {
                const cvec dx = lu->solve(r);
                for (std::size_t i = 0; i < u.size(); ++i) u[i] += dx[i];
            }
        } else {
            try {
                u = numerics::solve_sparse(backward, rhs, 1e-12);
            } catch (const SolverError& e) {
                throw SolverError("semigroup_apply: step " + std::to_string(s) + ": " +
                                      e.what(),
                                  e.achieved_residual);
            }
        }
    }
    return u;
}

cvec resolvent_apply(const DiscreteOperator& L, cxd zeta, const cvec& f) {
    const bool negative_real = zeta.imag() == 0.0 && zeta.real() < 0.0;
    if (!negative_real) {
        const double omega0 = ellipticity::sector_angle(L.A);
        const double arg = std::atan2(zeta.imag(), zeta.real());
        if (!(std::abs(arg) > omega0))
            throw PreconditionError("resolvent_apply: zeta inside the sector of angle " +
                                    fmt17(omega0));
    }

    const SparseComplexOperator shifted = L.matrix.scaled(cxd(-1.0, 0.0)).shifted(zeta);
    const cvec x = numerics::solve_sparse(shifted, f, 1e-12);

    if (negative_real && L.phase == 0.0) {
        // Discrete sectorial bound at zeta = -s for accretive assemblies.
        const double s = -zeta.real();
        bool accretive = true;
        try {
            accretive = ellipticity::lambda_of(L.A) > 0.0;
        } catch (...) {
            accretive = false;
        }
        if (accretive) {
            const double xn = numerics::norm2(x);
            const double fn = numerics::norm2(f);
            if (xn > (fn / s) * (1.0 + 1e-9))
                throw PreconditionError(
                    "resolvent_apply: sectorial bound violated: ||x|| = " + fmt17(xn) +
                    " > ||f||/s = " + fmt17(fn / s));
        }
    }
    return x;
}

double lp_norm(const cvec& f, double p, double cell_volume) {
    if (!(cell_volume > 0.0)) throw ParameterError("lp_norm: cell_volume must be > 0");
    if (std::isinf(p)) {
        double m = 0.0;
        for (cxd z : f) m = std::max(m, std::abs(z));
        return m;
    }
    if (!(p >= 1.0)) throw ParameterError("lp_norm: p must be in [1, inf]");
    double s = 0.0;
    for (cxd z : f) s += std::pow(std::abs(z), p);
    return std::pow(cell_volume * s, 1.0 / p);
}

double lp_norm(const cvec& f, double p, const GridDomain& domain) {
    return lp_norm(f, p, domain.cell_volume());
}

double grad_sq_at(const GridDomain& domain, const cvec& v, std::size_t cell) {
    const double inv_h = 1.0 / domain.h();
    double total = 0.0;
    for (int axis = 0; axis < domain.space_dim(); ++axis) {
        cxd d(0.0, 0.0);
        if (const auto nb = domain.neighbor(cell, axis, +1)) {
            d = (v[*nb] - v[cell]) * inv_h;
        } else if (domain.boundary_label(cell, axis, +1) == FaceLabel::Dirichlet) {
            d = -v[cell] * inv_h;
        }
        total += abs2(d);
    }
    return total;
}

rvec energy_density(const DiscreteOperator& L, const cvec& v) {
    const std::size_t n = L.domain.n_cells();
    rvec e(n);
    for (std::size_t c = 0; c < n; ++c)
        e[c] = std::sqrt(grad_sq_at(L.domain, v, c) + L.V[c] * abs2(v[c]));
    return e;
}

}  // namespace pellab::semigroup
