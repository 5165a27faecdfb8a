#include "pellab/bellman/certify.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pellab/ellipticity/constants.hpp"
#include "pellab/numerics/mollifier.hpp"
#include "pellab/rng.hpp"

namespace pellab::bellman {

using ellipticity::ComplexMatrix;
using ellipticity::ExponentOrMu;

std::string to_string(TauBranch b) {
    switch (b) {
        case TauBranch::P2: return "p2";
        case TauBranch::Above: return "above";
        case TauBranch::Below: return "below";
    }
    return "?";
}

namespace {

// sigma-independent ingredients of tau and of the proof constants.
struct PairData {
    double lambda_A;
    double Lambda_pair;
    double delta_p_pair;
    double delta_q_B;
    double delta_2q_B;   // Delta_{2-q}(B), raw-mu evaluation
    double Gamma;        // only meaningful for p > 2
    double D;
};

PairData pair_data(const BellmanParams& P, const ComplexMatrix& A, const ComplexMatrix& B) {
    PairData d{};
    d.lambda_A = ellipticity::lambda_of(A);
    d.Lambda_pair = std::max(ellipticity::Lambda_of(A), ellipticity::Lambda_of(B));
    d.delta_p_pair = std::min(ellipticity::delta_p(A, P.p), ellipticity::delta_p(B, P.p));
    if (P.p > 2.0) {
        d.delta_q_B = ellipticity::delta_p(B, P.q);
        d.delta_2q_B = ellipticity::delta_p(B, ExponentOrMu::from_p(2.0 - P.q));
        d.Gamma = P.q * P.q * d.delta_q_B / P.delta +
                  (2.0 - P.q) * (2.0 - P.q) * d.delta_2q_B;
        d.D = d.Gamma > 0.0 ? 2.0 * std::sqrt(std::max(d.lambda_A, 0.0) / d.Gamma)
                            : std::numeric_limits<double>::quiet_NaN();
    } else {
        d.delta_q_B = d.delta_p_pair;
        d.delta_2q_B = std::numeric_limits<double>::quiet_NaN();
        d.Gamma = std::numeric_limits<double>::quiet_NaN();
        d.D = std::numeric_limits<double>::quiet_NaN();
    }
    return d;
}

TauEstimate tau_from_data(const BellmanPoint& sigma, const BellmanParams& P,
                          const PairData& d) {
    if (P.p == 2.0) return {1.0, TauBranch::P2, d.Gamma, d.D};
    if (sigma.region == Region::AboveDiag) {
        const double u = std::abs(sigma.zeta);
        return {(P.p - 1.0) * std::pow(u, P.p - 2.0), TauBranch::Above, d.Gamma, d.D};
    }
    if (!(d.Gamma > 0.0))
        throw ParameterError("tau: Gamma = " + fmt17(d.Gamma) +
                             " <= 0, delta too large for this pair");
    const double v = std::abs(sigma.eta);
    return {d.D * std::pow(v, 2.0 - P.q), TauBranch::Below, d.Gamma, d.D};
}

}  // namespace

TauEstimate tau_of(const BellmanPoint& sigma, const BellmanParams& params,
                   const ComplexMatrix& A, const ComplexMatrix& B) {
    if (sigma.region == Region::OnUpsilon)
        throw RegionError("tau_of: point lies on Upsilon");
    const PairData d = pair_data(params, A, B);
    if (!(d.delta_p_pair > 0.0))
        throw PreconditionError("tau_of: Delta_p(A,B) = " + fmt17(d.delta_p_pair) +
                                " is not positive");
    return tau_from_data(sigma, params, d);
}

double choose_delta(double p, const ComplexMatrix& A, const ComplexMatrix& B) {
    const double delta_pair = std::min(ellipticity::delta_p(A, p), ellipticity::delta_p(B, p));
    if (!(delta_pair > 0.0))
        throw PreconditionError("choose_delta: Delta_p(A,B) = " + fmt17(delta_pair) +
                                " is not positive");
    const double lam = ellipticity::lambda_of(A);
    if (!(lam > 0.0))
        throw PreconditionError("choose_delta: lambda(A) = " + fmt17(lam) +
                                " is not positive");
    if (p == 2.0) return 0.5;

    const double q = p / (p - 1.0);
    const double two_q = 2.0 - q;
    const double Lam = std::max(ellipticity::Lambda_of(A), ellipticity::Lambda_of(B));
    const double R = sqr(two_q * Lam);
    const double dq = ellipticity::delta_p(B, q);
    const double c2 = sqr(two_q) * ellipticity::delta_p(B, ExponentOrMu::from_p(2.0 - q));

    // Gamma(delta) = q^2 dq / delta + c2 decreases in delta; the threshold
    // delta* solves lam * Gamma(delta*) / 4 = R when the denominator below
    // is positive, otherwise the inequality holds for every delta.
    const double den = 4.0 * R - lam * c2;
    if (den <= 0.0) return 0.5;
    const double delta_star = q * q * dq * lam / den;
    return std::min(0.5, 0.5 * delta_star);
}

double choose_delta(double p, const ellipticity::MatrixField& A,
                    const ellipticity::MatrixField& B) {
    const double delta_pair =
        std::min(ellipticity::delta_p_field(A, p), ellipticity::delta_p_field(B, p));
    if (!(delta_pair > 0.0))
        throw PreconditionError("choose_delta: Delta_p(A,B) = " + fmt17(delta_pair) +
                                " is not positive");
    const double lam = ellipticity::lambda_of(A);
    if (!(lam > 0.0))
        throw PreconditionError("choose_delta: lambda(A) = " + fmt17(lam) +
                                " is not positive");
    if (p == 2.0) return 0.5;

    const double q = p / (p - 1.0);
    const double two_q = 2.0 - q;
    const double Lam = std::max(ellipticity::Lambda_of(A), ellipticity::Lambda_of(B));
    const double R = sqr(two_q * Lam);
    const double dq = ellipticity::delta_p_field(B, q);
    const double c2 =
        sqr(two_q) * ellipticity::delta_p_field(B, ExponentOrMu::from_p(2.0 - q));

    const double den = 4.0 * R - lam * c2;
    if (den <= 0.0) return 0.5;
    return std::min(0.5, 0.5 * (q * q * dq * lam / den));
}

ConvexityTheory convexity_constants_theory(const BellmanParams& params, const ComplexMatrix& A,
                                           const ComplexMatrix& B) {
    const PairData d = pair_data(params, A, B);
    if (!(d.delta_p_pair > 0.0))
        throw PreconditionError("convexity_constants_theory: pair is not p-elliptic");
    const double lambda_pair =
        std::min(ellipticity::lambda_of(A), ellipticity::lambda_of(B));

    if (params.p == 2.0)
        return {2.0 * lambda_pair, 1.0 + params.delta, 1.0};

    if (!(d.Gamma > 0.0))
        throw ParameterError("convexity_constants_theory: Gamma <= 0 for this delta");

    const double p = params.p, q = params.q, delta = params.delta;
    const double c_above = 0.5 * p * q * d.delta_p_pair;
    const double c_below =
        delta * (std::sqrt(d.lambda_A * d.Gamma) - 2.0 * (2.0 - q) * d.Lambda_pair);
    const double cgz_above = (0.5 * p + delta) / (p - 1.0);
    const double cgz_below = delta / d.D;
    const double cge_above = (0.5 * q + 0.5 * delta * (2.0 - q)) * (p - 1.0);
    const double cge_below = 0.5 * d.D * q;
    return {std::min(c_above, c_below), std::min(cgz_above, cgz_below),
            std::min(cge_above, cge_below)};
}

namespace {

struct SampleResult {
    TauBranch branch;
    double r_hess, r_gz, r_ge;
    cxd zeta, eta;
};

// One (sigma, omega) draw and its three ratios. below_tau_defined = false
// switches the Below weight to 1 so exploration of non-elliptic pairs can
// still report negative Hessian ratios.
SampleResult evaluate_sample(Rng& rng, const BellmanParams& P, const ComplexMatrix& A,
                             const ComplexMatrix& B, const PairData& data,
                             bool below_tau_defined) {
    const int d = A.dim();
    cxd zeta, eta;
    BellmanPoint sigma{0.0, 0.0, Region::OnUpsilon};
    do {
        zeta = rng.log_uniform(1e-3, 1e3) * rng.unit_phase();
        eta = rng.log_uniform(1e-3, 1e3) * rng.unit_phase();
        sigma = classify(zeta, eta, P);
    } while (sigma.region == Region::OnUpsilon);

    HessianDirection omega;
    double n1 = 0.0, n2 = 0.0;
    do {
        omega.omega1.assign(d, cxd(0, 0));
        omega.omega2.assign(d, cxd(0, 0));
        n1 = n2 = 0.0;
        for (int j = 0; j < d; ++j) {
            omega.omega1[j] = rng.complex_normal();
            omega.omega2[j] = rng.complex_normal();
            n1 += abs2(omega.omega1[j]);
            n2 += abs2(omega.omega2[j]);
        }
    } while (n1 == 0.0 || n2 == 0.0);

    double tau;
    TauBranch branch;
    if (P.p == 2.0) {
        tau = 1.0;
        branch = TauBranch::P2;
    } else if (sigma.region == Region::AboveDiag) {
        tau = (P.p - 1.0) * std::pow(std::abs(zeta), P.p - 2.0);
        branch = TauBranch::Above;
    } else {
        branch = TauBranch::Below;
        tau = below_tau_defined ? data.D * std::pow(std::abs(eta), 2.0 - P.q) : 1.0;
    }

    const double H = generalized_hessian(A, B, sigma, omega, P);
    const auto [gz, ge] = Q_gradient_products(sigma, P);
    SampleResult r;
    r.branch = branch;
    r.r_hess = H / (tau * n1 + n2 / tau);
    r.r_gz = gz / (tau * abs2(zeta));
    r.r_ge = ge / (abs2(eta) / tau);
    r.zeta = zeta;
    r.eta = eta;
    return r;
}

void fold(BranchMinima& m, const SampleResult& s, std::uint64_t index) {
    ++m.count;
    if (s.r_hess < m.c_hess || (s.r_hess == m.c_hess && index < m.worst_index)) {
        m.c_hess = s.r_hess;
        m.worst_zeta = s.zeta;
        m.worst_eta = s.eta;
        m.worst_index = index;
    }
    m.c_gz = std::min(m.c_gz, s.r_gz);
    m.c_ge = std::min(m.c_ge, s.r_ge);
}

void merge(BranchMinima& into, const BranchMinima& from) {
    into.count += from.count;
    if (from.c_hess < into.c_hess ||
        (from.c_hess == into.c_hess && from.worst_index < into.worst_index)) {
        into.c_hess = from.c_hess;
        into.worst_zeta = from.worst_zeta;
        into.worst_eta = from.worst_eta;
        into.worst_index = from.worst_index;
    }
    into.c_gz = std::min(into.c_gz, from.c_gz);
    into.c_ge = std::min(into.c_ge, from.c_ge);
}

// Deterministic probes aimed at the direction realizing Delta_p(A); these
// make the search find Hessian negativity whenever A fails p-ellipticity.
std::vector<std::pair<BellmanPoint, HessianDirection>> structured_probes(
    const BellmanParams& P, const ComplexMatrix& A) {
    const int d = A.dim();
    const auto embedding = ellipticity::real_form_embedding(A, std::abs(1.0 - 2.0 / P.p));
    const auto [eig, vec] = numerics::sym_eig_min(embedding);
    (void)eig;
    const cvec xi_min = ellipticity::identify_V_inverse(vec);

    std::vector<std::pair<BellmanPoint, HessianDirection>> probes;
    for (double mag : {0.5, 2.0, 10.0}) {
        const cxd zeta(mag, 0.0);
        const cxd eta(0.1 * std::pow(mag, P.p / P.q), 0.0);
        const BellmanPoint sigma = classify(zeta, eta, P);
        if (sigma.region == Region::OnUpsilon) continue;
        HessianDirection omega;
        omega.omega1 = xi_min;
        omega.omega2.assign(d, cxd(0.0, 0.0));
        omega.omega2[0] = cxd(1e-8, 0.0);  // keep both denominators positive
        probes.push_back({sigma, omega});
    }
    return probes;
}

}  // namespace

ConvexityCertificate verify_convexity(const ComplexMatrix& A, const ComplexMatrix& B,
                                      const BellmanParams& params, long n_samples,
                                      std::uint64_t seed, int threads) {
    if (A.dim() != B.dim()) throw StructuralError("verify_convexity: dimension mismatch");
    if (n_samples < 1) throw ParameterError("verify_convexity: n_samples must be >= 1");
    threads = std::max(1, threads);

    const PairData data = pair_data(params, A, B);
    const bool below_defined = params.p == 2.0 || data.Gamma > 0.0;
    const Rng base(seed);

    const auto fresh_minima = [] {
        std::array<BranchMinima, 3> m;
        m[0].branch = TauBranch::P2;
        m[1].branch = TauBranch::Above;
        m[2].branch = TauBranch::Below;
        return m;
    };
    std::vector<std::array<BranchMinima, 3>> partial(threads, fresh_minima());

    const auto worker = [&](int w, long lo, long hi) {
        auto& mins = partial[w];
        for (long k = lo; k < hi; ++k) {
            Rng rng = base.substream(static_cast<std::uint64_t>(k));
            const SampleResult s = evaluate_sample(rng, params, A, B, data, below_defined);
            fold(mins[static_cast<int>(s.branch)], s, static_cast<std::uint64_t>(k));
        }
    };

    if (threads == 1) {
        worker(0, 0, n_samples);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (n_samples + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const long lo = w * chunk;
            const long hi = std::min<long>(n_samples, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, w, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    std::array<BranchMinima, 3> mins = fresh_minima();
    for (const auto& part : partial)
        for (int b = 0; b < 3; ++b) merge(mins[b], part[b]);

    // Structured probes run serially after the random sweep.
    std::uint64_t probe_index = static_cast<std::uint64_t>(n_samples);
    for (const auto& [sigma, omega] : structured_probes(params, A)) {
        TauBranch branch;
        double tau;
        if (params.p == 2.0) {
            branch = TauBranch::P2;
            tau = 1.0;
        } else if (sigma.region == Region::AboveDiag) {
            branch = TauBranch::Above;
            tau = (params.p - 1.0) * std::pow(std::abs(sigma.zeta), params.p - 2.0);
        } else {
            branch = TauBranch::Below;
            tau = below_defined ? data.D * std::pow(std::abs(sigma.eta), 2.0 - params.q) : 1.0;
        }
        double n1 = 0.0, n2 = 0.0;
        for (cxd z : omega.omega1) n1 += abs2(z);
        for (cxd z : omega.omega2) n2 += abs2(z);
        SampleResult s;
        s.branch = branch;
        s.r_hess = generalized_hessian(A, B, sigma, omega, params) / (tau * n1 + n2 / tau);
        const auto [gz, ge] = Q_gradient_products(sigma, params);
        s.r_gz = gz / (tau * abs2(sigma.zeta));
        s.r_ge = ge / (abs2(sigma.eta) / tau);
        s.zeta = sigma.zeta;
        s.eta = sigma.eta;
        fold(mins[static_cast<int>(branch)], s, probe_index++);
    }

    ConvexityCertificate cert;
    cert.seed = seed;
    cert.n_samples = n_samples;
    for (int b = 0; b < 3; ++b) {
        if (mins[b].count == 0) continue;
        cert.branches.push_back(mins[b]);
        if (mins[b].c_hess < cert.c_hess) {
            cert.c_hess = mins[b].c_hess;
            cert.worst_zeta = mins[b].worst_zeta;
            cert.worst_eta = mins[b].worst_eta;
        }
        cert.c_gz = std::min(cert.c_gz, mins[b].c_gz);
        cert.c_ge = std::min(cert.c_ge, mins[b].c_ge);
    }
    return cert;
}

namespace {

// Evaluation point for mollification quadrature: W-coordinates shifted by
// the kernel variable, with |eta| floored away from Upsilon so branch data
// stays finite. Flooring evaluates at a nearby admissible point, which
// keeps nodewise inequalities intact.
BellmanPoint node_point(const std::array<double, 4>& z, const BellmanParams& P,
                        double vfloor) {
    cxd zeta(z[0], z[1]);
    cxd eta(z[2], z[3]);
    if (std::abs(eta) < vfloor) eta = cxd(vfloor, 0.0);
    const double a = std::pow(std::abs(zeta), P.p);
    const double b = std::pow(std::abs(eta), P.q);
    return {zeta, eta, a >= b ? Region::AboveDiag : Region::BelowDiag};
}

}  // namespace

double mollified_Q(const BellmanPoint& sigma, const BellmanParams& params, double kappa,
                   int nodes_per_axis) {
    const rvec w = ellipticity::identify_W({sigma.zeta}, {sigma.eta});
    const std::array<double, 4> x = {w[0], w[1], w[2], w[3]};
    return numerics::convolve4(
        [&](const std::array<double, 4>& z) {
            return Q_eval(cxd(z[0], z[1]), cxd(z[2], z[3]), params);
        },
        x, kappa, nodes_per_axis);
}

double mollified_hessian(const ComplexMatrix& A, const ComplexMatrix& B,
                         const BellmanPoint& sigma, const HessianDirection& omega,
                         const BellmanParams& params, double kappa, int nodes_per_axis) {
    const rvec w = ellipticity::identify_W({sigma.zeta}, {sigma.eta});
    const std::array<double, 4> x = {w[0], w[1], w[2], w[3]};
    const double vfloor = 1e-13 * (1.0 + std::abs(sigma.eta) + kappa);
    return numerics::convolve4(
        [&](const std::array<double, 4>& z) {
            return generalized_hessian(A, B, node_point(z, params, vfloor), omega, params);
        },
        x, kappa, nodes_per_axis);
}

std::pair<double, double> mollified_tau(const BellmanPoint& sigma, const BellmanParams& params,
                                        const ComplexMatrix& A, const ComplexMatrix& B,
                                        double kappa, int nodes_per_axis) {
    const PairData data = pair_data(params, A, B);
    if (params.p > 2.0 && !(data.Gamma > 0.0))
        throw ParameterError("mollified_tau: Gamma <= 0, delta too large");
    const rvec w = ellipticity::identify_W({sigma.zeta}, {sigma.eta});
    const std::array<double, 4> x = {w[0], w[1], w[2], w[3]};
    const double vfloor = 1e-13 * (1.0 + std::abs(sigma.eta) + kappa);

    const auto tau_at = [&](const std::array<double, 4>& z) {
        const BellmanPoint pt = node_point(z, params, vfloor);
        return tau_from_data(pt, params, data).tau;
    };
    const double t = numerics::convolve4(tau_at, x, kappa, nodes_per_axis);
    const double tinv = numerics::convolve4(
        [&](const std::array<double, 4>& z) { return 1.0 / tau_at(z); }, x, kappa,
        nodes_per_axis);
    return {t, tinv};
}

MollifiedCertificate mollified_certificate(const ComplexMatrix& A, const ComplexMatrix& B,
                                           const BellmanParams& params, double kappa,
                                           int nodes_per_axis, int n_points,
                                           std::uint64_t seed) {
    const double c_ref = convexity_constants_theory(params, A, B).c_hess;
    if (!(c_ref > 0.0))
        throw PreconditionError("mollified_certificate: nonpositive reference constant");

    const int d = A.dim();
    MollifiedCertificate out;
    out.c_ref = c_ref;
    out.min_ratio = std::numeric_limits<double>::infinity();

    const Rng base(seed);
    for (int k = 0; k < n_points; ++k) {
        Rng rng = base.substream(static_cast<std::uint64_t>(k));
        cxd zeta = rng.log_uniform(0.2, 5.0) * rng.unit_phase();
        cxd eta;
        if (k % 2 == 0) {
            // near the gluing surface, where mollification matters most
            const double vmag =
                std::pow(std::abs(zeta), params.p / params.q) * (1.0 + 0.05 * (rng.uniform() - 0.5));
            eta = vmag * rng.unit_phase();
        } else {
            eta = rng.log_uniform(0.2, 5.0) * rng.unit_phase();
        }
        HessianDirection omega;
        omega.omega1.resize(d);
        omega.omega2.resize(d);
        double n1 = 0.0, n2 = 0.0;
        for (int j = 0; j < d; ++j) {
            omega.omega1[j] = rng.complex_normal();
            omega.omega2[j] = rng.complex_normal();
            n1 += abs2(omega.omega1[j]);
            n2 += abs2(omega.omega2[j]);
        }
        if (n1 == 0.0 || n2 == 0.0) continue;

        const BellmanPoint sigma{zeta, eta, Region::OnUpsilon};  // region unused below
        const double lhs = mollified_hessian(A, B, sigma, omega, params, kappa, nodes_per_axis);
        const auto [tm, tim] = mollified_tau(sigma, params, A, B, kappa, nodes_per_axis);
        const double rhs = c_ref * (tm * n1 + tim * n2);
        const double ratio = lhs / rhs;
        if (ratio < out.min_ratio) {
            out.min_ratio = ratio;
            out.worst_zeta = zeta;
            out.worst_eta = eta;
        }
    }
    return out;
}

std::optional<std::pair<double, double>> quadratic_gap(double a, double b, double c) {
    if (!(a > 0.0) || !(c > 0.0)) return std::nullopt;
    if (!(a * c - b * b > 0.0)) return std::nullopt;
    return std::make_pair(std::sqrt(a * c) - std::abs(b), std::sqrt(a / c));
}

cxd normal_contraction(ContractionKind kind, cxd z) {
    switch (kind) {
        case ContractionKind::P:
            return std::abs(z) <= 1.0 ? z : z / std::abs(z);
        case ContractionKind::T:
            return cxd(std::max(z.real(), 0.0), 0.0);
        case ContractionKind::Sign:
            return csign(z);
    }
    throw ParameterError("normal_contraction: unknown kind");
}

}  // namespace pellab::bellman
