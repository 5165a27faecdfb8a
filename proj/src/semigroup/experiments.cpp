#include "pellab/semigroup/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "pellab/ellipticity/constants.hpp"
#include "pellab/numerics/lp_project.hpp"
#include "pellab/rng.hpp"

namespace pellab::semigroup {

namespace {

cvec random_field(Rng& rng, std::size_t n) {
    cvec f(n);
    for (auto& z : f) z = rng.complex_normal();
    return f;
}

bool real_assembly(const DiscreteOperator& L) {
    for (cxd v : L.matrix.values())
        if (v.imag() != 0.0) return false;
    return true;
}

// Substep count keeping (I - dt/2 L) entrywise nonnegative for real
// assemblies, so each Crank-Nicolson step is sub-Markovian.
int positivity_steps(const DiscreteOperator& L, double t) {
    double maxdiag = 0.0;
    for (int i = 0; i < L.matrix.dim(); ++i)
        maxdiag = std::max(maxdiag, L.matrix.diagonal(i).real());
    const int base = default_steps(L, t);
    const int pos = static_cast<int>(std::ceil(0.5 * t * maxdiag * 1.0000001)) + 1;
    return std::max(base, pos);
}

double resolve_t_min(const DiscreteOperator& L, const TimeGridSpec& grid) {
    return grid.t_min > 0.0 ? grid.t_min : sqr(L.domain.h());
}

}  // namespace

double contractivity_experiment(const DiscreteOperator& L, double p, double phase,
                                const rvec& t_list, int n_trials, std::uint64_t seed) {
    if (!(p > 1.0)) throw ParameterError("contractivity_experiment: p must be > 1");
    const DiscreteOperator* op = &L;
    DiscreteOperator rotated = L;
    if (phase != L.phase) {
        rotated = assemble(L.domain, L.A, L.V, phase);
        op = &rotated;
    }
    const bool real_ops = real_assembly(*op);

    double worst = 0.0;
    const Rng base(seed);
    for (int trial = 0; trial < n_trials; ++trial) {
        Rng rng = base.substream(trial);
        const cvec f = random_field(rng, op->domain.n_cells());
        const double fn = lp_norm(f, p, op->domain);
        if (fn == 0.0) continue;
        for (double t : t_list) {
            const int steps = real_ops ? positivity_steps(*op, t) : default_steps(*op, t);
            const cvec u = semigroup_apply(*op, f, t, steps);
            worst = std::max(worst, lp_norm(u, p, op->domain) / fn);
        }
    }
    return worst;
}

double dissipativity_check(const DiscreteOperator& L, double p, int n_trials,
                           std::uint64_t seed) {
    if (!(p > 1.0)) throw ParameterError("dissipativity_check: p must be > 1");
    const std::size_t n = L.domain.n_cells();
    const double vol = L.domain.cell_volume();

    const auto value_of = [&](cvec u) {
        // normalize ||u||_{2,h} = 1 to keep values comparable across trials
        double nrm = lp_norm(u, 2.0, L.domain);
        if (nrm == 0.0) return std::numeric_limits<double>::infinity();
        for (auto& z : u) z /= nrm;
        cvec g(n);
        for (std::size_t c = 0; c < n; ++c)
            g[c] = std::pow(std::abs(u[c]), p - 2.0) * u[c];
        const cvec Mu = L.matrix.apply(u);
        double re = 0.0;
        for (std::size_t c = 0; c < n; ++c) re += (Mu[c] * std::conj(g[c])).real();
        return re * vol;
    };

    double worst = std::numeric_limits<double>::infinity();
    const Rng base(seed);
    for (int trial = 0; trial < n_trials; ++trial) {
        Rng rng = base.substream(trial);
        cvec u = random_field(rng, n);
        if (p < 2.0)
            for (auto& z : u)
                if (std::abs(z) < 1e-12) z += cxd(1e-6, 1e-6);
        worst = std::min(worst, value_of(std::move(u)));
    }

    // Probe built from the direction realizing Delta_p of the worst cell.
    std::size_t worst_cell = 0;
    double worst_delta = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
        const double d = ellipticity::delta_p(L.A.at(c), p);
        if (d < worst_delta) {
            worst_delta = d;
            worst_cell = c;
        }
        if (L.A.is_constant()) break;
    }
    const auto embedding =
        ellipticity::real_form_embedding(L.A.at(worst_cell), std::abs(1.0 - 2.0 / p));
    const auto xi_min = ellipticity::identify_V_inverse(numerics::sym_eig_min(embedding).second);
    // Amplitudes large enough that the bulk quadratic term dominates any
    // positive Dirichlet boundary contribution, yet strictly below 1 so the
    // probe never vanishes.
    for (double eps : {0.5, 0.1, 1e-2, 1e-3}) {
        cvec u(n);
        for (std::size_t c = 0; c < n; ++c)
            u[c] = cxd(1.0, 0.0) + eps * (c % 2 == 0 ? 1.0 : -1.0) * xi_min[0];
        worst = std::min(worst, value_of(std::move(u)));
    }
    return worst;
}

namespace {

double bilinear_integrand(const DiscreteOperator& LA, const DiscreteOperator& LB,
                          const cvec& v, const cvec& w) {
    const rvec ev = energy_density(LA, v);
    const rvec ew = energy_density(LB, w);
    double s = 0.0;
    for (std::size_t c = 0; c < ev.size(); ++c) s += ev[c] * ew[c];
    return s * LA.domain.cell_volume();
}

int interval_steps(const DiscreteOperator& L, double dt) {
    return std::max(4, static_cast<int>(std::ceil(dt / L.domain.h())));
}

}  // namespace

EmbeddingReport bilinear_embedding(const DiscreteOperator& LA, const DiscreteOperator& LB,
                                   const cvec& f, const cvec& g, double p,
                                   const TimeGridSpec& grid) {
    if (LA.domain.n_cells() != LB.domain.n_cells() ||
        LA.domain.space_dim() != LB.domain.space_dim() || LA.domain.h() != LB.domain.h())
        throw StructuralError("bilinear_embedding: operators on different grids");
    if (!(p > 1.0)) throw ParameterError("bilinear_embedding: p must be > 1");
    const double q = p / (p - 1.0);

    EmbeddingReport rep;
    rep.fp_norm = lp_norm(f, p, LA.domain);
    rep.gq_norm = lp_norm(g, q, LB.domain);

    const double t_min = resolve_t_min(LA, grid);
    cvec v = f, w = g;
    double t_prev = 0.0;
    double s_prev = bilinear_integrand(LA, LB, v, w);
    double integral = 0.0;
    double t_last = 0.0, s_last = s_prev, s_before = s_prev, dt_last = 0.0;

    double decade_sum = 0.0;  // contribution of times in (T/10, T]
    std::vector<std::pair<double, double>> panels;  // (t_k, panel integral)

    for (int k = 0; k < grid.max_points; ++k) {
        const double t_k = t_min * std::pow(grid.rho, k);
        if (t_k > grid.t_cap) break;
        const double dt = t_k - t_prev;
        v = semigroup_apply(LA, v, dt, interval_steps(LA, dt));
        w = semigroup_apply(LB, w, dt, interval_steps(LB, dt));
        const double s_k = bilinear_integrand(LA, LB, v, w);
        const double panel = 0.5 * (s_prev + s_k) * dt;
        integral += panel;
        panels.push_back({t_k, panel});

        s_before = s_prev;
        s_last = s_k;
        dt_last = dt;
        t_last = t_k;
        t_prev = t_k;
        s_prev = s_k;

        if (k >= 8) {
            decade_sum = 0.0;
            for (const auto& [tk, pk] : panels)
                if (tk > t_last / 10.0) decade_sum += pk;
            if (integral > 0.0 && decade_sum < grid.tail_fraction * integral) break;
            if (integral == 0.0) break;
        }
    }

    rep.T_max = t_last;
    rep.value = integral;
    rep.ratio = (rep.fp_norm > 0.0 && rep.gq_norm > 0.0)
                    ? integral / (rep.fp_norm * rep.gq_norm)
                    : 0.0;

    // Geometric extrapolation of the remaining tail from the last decay rate.
    if (s_before > 0.0 && s_last > 0.0 && dt_last > 0.0) {
        const double decay = s_last / s_before;
        const double growth = decay * grid.rho;
        rep.tail_estimate = growth < 1.0
                                ? s_last * dt_last * growth / (1.0 - growth)
                                : std::numeric_limits<double>::infinity();
    } else {
        rep.tail_estimate = 0.0;
    }
    return rep;
}

FlowTrace flow_trace(const DiscreteOperator& LA, const DiscreteOperator& LB, const cvec& f,
                     const cvec& g, const bellman::BellmanParams& params,
                     const TimeGridSpec& grid) {
    if (LA.domain.n_cells() != LB.domain.n_cells() || LA.domain.h() != LB.domain.h())
        throw StructuralError("flow_trace: operators on different grids");
    if (LA.phase != 0.0 || LB.phase != 0.0)
        throw ParameterError("flow_trace: requires phase 0 on both operators");

    const DiscreteOperator LA0 = without_potential(LA);
    const DiscreteOperator LB0 = without_potential(LB);
    const std::size_t n = LA.domain.n_cells();
    const double vol = LA.domain.cell_volume();

    FlowTrace trace;
    const auto record = [&](double t, const cvec& v, const cvec& w) {
        double E = 0.0;
        double I1 = 0.0, I2 = 0.0;
        const cvec Av = LA0.matrix.apply(v);
        const cvec Bw = LB0.matrix.apply(w);
        for (std::size_t c = 0; c < n; ++c) {
            const auto pt = bellman::classify(v[c], w[c], params);
            if (pt.region == bellman::Region::OnUpsilon) ++trace.upsilon_hits;
            E += bellman::Q_eval(pt, params);
            const auto [dz, de] = bellman::Q_wirtinger_forced(v[c], w[c], params);
            I1 += 2.0 * ((dz * Av[c]).real() + (de * Bw[c]).real());
            I2 += 2.0 * (LA.V[c] * (dz * v[c]).real() + LB.V[c] * (de * w[c]).real());
        }
        trace.times.push_back(t);
        trace.E.push_back(E * vol);
        trace.I1.push_back(I1 * vol);
        trace.I2.push_back(I2 * vol);
        trace.integrand_lower.push_back(bilinear_integrand(LA, LB, v, w));
    };

    const double t_min = resolve_t_min(LA, grid);
    cvec v = f, w = g;
    record(0.0, v, w);
    double t_prev = 0.0;
    for (int k = 0; k < grid.max_points; ++k) {
        const double t_k = t_min * std::pow(grid.rho, k);
        if (t_k > grid.t_cap) break;
        const double dt = t_k - t_prev;
        v = semigroup_apply(LA, v, dt, interval_steps(LA, dt));
        w = semigroup_apply(LB, w, dt, interval_steps(LB, dt));
        record(t_k, v, w);
        t_prev = t_k;
        if (trace.E.back() == 0.0) break;
        if (k >= 8 && trace.E.back() < grid.tail_fraction * trace.E.front()) break;
    }

    trace.dE_numeric.assign(trace.times.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 1; k + 1 < trace.times.size(); ++k)
        trace.dE_numeric[k] =
            (trace.E[k + 1] - trace.E[k - 1]) / (trace.times[k + 1] - trace.times[k - 1]);
    return trace;
}

TruncationTable truncation_convergence(const GridDomain& domain,
                                       const ellipticity::MatrixField& A,
                                       const rvec& V_unbounded, double s, const cvec& f,
                                       const rvec& n_list) {
    if (!(s > 0.0)) throw ParameterError("truncation_convergence: s must be > 0");
    const std::size_t n = domain.n_cells();
    const double vol = domain.cell_volume();

    const auto solve_with = [&](const rvec& V) {
        const DiscreteOperator op = assemble(domain, A, V, 0.0);
        return numerics::solve_sparse(op.matrix.shifted(cxd(s, 0.0)), f, 1e-12);
    };

    const cvec u_inf = solve_with(V_unbounded);

    TruncationTable table;
    for (double cap : n_list) {
        rvec Vn(n);
        for (std::size_t c = 0; c < n; ++c) Vn[c] = std::min(V_unbounded[c], cap);
        const cvec u_n = solve_with(Vn);

        double eg = 0.0, ep = 0.0;
        cvec diff(n);
        for (std::size_t c = 0; c < n; ++c) diff[c] = u_n[c] - u_inf[c];
        for (std::size_t c = 0; c < n; ++c) {
            eg += grad_sq_at(domain, diff, c);
            ep += abs2(std::sqrt(Vn[c]) * u_n[c] - std::sqrt(V_unbounded[c]) * u_inf[c]);
        }
        table.n.push_back(cap);
        table.e_grad.push_back(std::sqrt(eg * vol));
        table.e_pot.push_back(std::sqrt(ep * vol));
    }
    return table;
}

bool lp_ball_invariance_probe(const DiscreteOperator& L, double p, int n_trials,
                              std::uint64_t seed) {
    if (!(p > 1.0)) throw ParameterError("lp_ball_invariance_probe: p must be > 1");
    const std::size_t n = L.domain.n_cells();
    std::size_t n_dirichlet = 0;
    for (const auto& face : L.domain.boundary_faces())
        if (face.label == FaceLabel::Dirichlet) ++n_dirichlet;

    const Rng base(seed);
    for (int trial = 0; trial < n_trials; ++trial) {
        Rng rng = base.substream(trial);
        cvec ext(n + n_dirichlet, cxd(0.0, 0.0));
        for (std::size_t c = 0; c < n; ++c) ext[c] = 4.0 * rng.complex_normal();
        const cvec proj = numerics::project_lp_ball(ext, p, L.domain.cell_volume());
        for (std::size_t k = n; k < ext.size(); ++k)
            if (proj[k] != cxd(0.0, 0.0)) return false;
    }
    return true;
}

}  // namespace pellab::semigroup
