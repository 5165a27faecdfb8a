// Acceptance suite: one pass/fail line per criterion, exit 1 on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "pellab/bellman/certify.hpp"
#include "pellab/ellipticity/constants.hpp"
#include "pellab/rng.hpp"
#include "pellab/semigroup/experiments.hpp"

using namespace pellab;
using ellipticity::ComplexMatrix;
using ellipticity::MatrixField;
using semigroup::FaceLabel;
using semigroup::GridDomain;

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComplexMatrix scalar_rotation(double theta) {
    return ComplexMatrix::scalar(cxd(std::cos(theta), std::sin(theta)));
}

double direct_form(const ComplexMatrix& A, const cvec& xi, double mu) {
    const cvec Axi = A.apply(xi);
    cxd plain(0, 0), conj_part(0, 0);
    for (std::size_t j = 0; j < xi.size(); ++j) {
        plain += Axi[j] * std::conj(xi[j]);
        conj_part += Axi[j] * xi[j];
    }
    return plain.real() + mu * conj_part.real();
}

ComplexMatrix random_real_elliptic(Rng& rng, int d) {
    for (;;) {
        ComplexMatrix A(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) A(i, j) = (i == j ? 1.5 : 0.0) + 0.7 * rng.normal();
        if (ellipticity::lambda_of(A) > 0.2) return A;
    }
}

GridDomain dirichlet_interval(int n) {
    return GridDomain(n, 1.0 / (n + 1), FaceLabel::Dirichlet, FaceLabel::Dirichlet);
}

MatrixField scalar_field(cxd a, const GridDomain& g) {
    return MatrixField(ComplexMatrix::scalar(a), g.n_cells());
}

MatrixField wavy_field(const GridDomain& g) {
    MatrixField F(ComplexMatrix::identity(1), g.n_cells());
    for (std::size_t c = 0; c < g.n_cells(); ++c) {
        ComplexMatrix m(1);
        m(0, 0) = 1.0 + 0.8 * std::sin(5.0 * g.coordinates(c)[0]);
        F.set_cell(c, m);
    }
    return F;
}

cvec sine_mode(const GridDomain& g) {
    cvec f(g.n_cells());
    const double L = (g.nx() + 1) * g.h();
    for (std::size_t c = 0; c < g.n_cells(); ++c)
        f[c] = std::sin(kPi * g.coordinates(c)[0] / L);
    return f;
}

// Measured Hessian constant for the (p=4, 1, 1) scalar pair; shared between
// criteria 4 and 10.
double g_c_hess_model = 0.0;

// ---------------------------------------------------------------------------
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    for (int d : {1, 2, 4, 8})
        for (double p : {2.0, 3.0, 4.0, 10.0}) {
            const double got = ellipticity::delta_p(ComplexMatrix::identity(d), p);
            if (std::abs(got - 2.0 / p) > 1e-10) {
                ok = false;
                detail = "Delta_p(I_" + std::to_string(d) + ") off at p=" + fmt17(p);
            }
        }

    // identity oracle (from above; two-sided for d <= 2)
    Rng rng(2024);
    for (int d : {1, 2, 4, 8}) {
        const double mu = 0.5;  // p = 4
        double sampled = std::numeric_limits<double>::infinity();
        const long n = 1000000;
        for (long k = 0; k < n; ++k)
            sampled = std::min(sampled, direct_form(ComplexMatrix::identity(d),
                                                    rng.unit_vector(d), mu));
        const double exact = 1.0 - mu;
        if (exact > sampled + 1e-12) {
            ok = false;
            detail = "oracle below closed form at d=" + std::to_string(d);
        }
        if (d <= 2 && sampled - exact > 1e-5) {
            ok = false;
            detail = "oracle gap " + fmt17(sampled - exact) + " at d=" + std::to_string(d);
        }
    }

    // rotated scalars: closed form and the sphere oracle
    double worst_closed = 0.0, worst_oracle = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double theta = rng.uniform(0.05, 1.5);
        const double p = rng.uniform(2.0, 12.0);
        const double mu = std::abs(1.0 - 2.0 / p);
        const double got = ellipticity::delta_p(scalar_rotation(theta), p);
        const double exact = std::cos(theta) - mu;
        worst_closed = std::max(worst_closed, std::abs(got - exact));

        double sampled = std::numeric_limits<double>::infinity();
        for (long i = 0; i < 1000000; ++i) {
            const double a = rng.uniform(0.0, 2.0 * kPi);
            sampled = std::min(sampled, std::cos(theta) + mu * std::cos(theta + 2.0 * a));
        }
        worst_oracle = std::max(worst_oracle, std::abs(sampled - got));
    }
    if (worst_closed > 1e-9) {
        ok = false;
        detail = "closed-form mismatch " + fmt17(worst_closed);
    }
    if (worst_oracle > 1e-5) {
        ok = false;
        detail = "oracle mismatch " + fmt17(worst_oracle);
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 10.0) {
        ok = false;
        detail = "runtime " + fmt17(elapsed) + " s";
    }
    if (ok)
        detail = "closed forms to " + fmt17(worst_closed) + ", oracle gap " +
                 fmt17(worst_oracle) + ", " + fmt17(elapsed) + " s";
    report(1, "Delta_p closed-form checks", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_2() {
    Rng rng(2025);
    bool ok = true;
    std::string detail = "200 matrices";
    double worst_sym = 0.0;
    for (int trial = 0; trial < 200 && ok; ++trial) {
        const int d = 1 + trial % 4;
        ComplexMatrix A(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) A(i, j) = rng.complex_normal();

        for (double p : {2.5, 4.0, 17.0}) {
            const double q = p / (p - 1.0);
            worst_sym = std::max(worst_sym, std::abs(ellipticity::delta_p(A, p) -
                                                     ellipticity::delta_p(A, q)));
            if (worst_sym > 1e-12) {
                ok = false;
                detail = "conjugate symmetry violated: " + fmt17(worst_sym);
            }
        }

        // monotone decrease on [2, 32] for an accretive shift of A
        ComplexMatrix S = A;
        const double lam = ellipticity::lambda_of(A);
        if (lam < 0.1)
            for (int i = 0; i < d; ++i) S(i, i) += (0.1 - lam);
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 20; ++k) {
            const double p = 2.0 * std::pow(16.0, k / 19.0);
            const double val = ellipticity::delta_p(S, p);
            if (val > prev + 1e-12) {
                ok = false;
                detail = "monotonicity violated at p=" + fmt17(p);
            }
            prev = val;
        }
    }
    if (ok) detail += ", conjugation gap " + fmt17(worst_sym);
    report(2, "conjugate symmetry and monotonicity of Delta_p", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_3() {
    Rng rng(2026);
    bool ok = true;
    std::string detail;

    for (double p : {2.0, 3.0, 4.0}) {
        const bellman::BellmanParams P(p, 0.3);

        // C0 gluing, 1000 random points, relative 1e-12
        for (int k = 0; k < 1000 && ok; ++k) {
            const double s = rng.log_uniform(1e-2, 1e2);
            const cxd z = std::pow(s, 1.0 / P.p) * rng.unit_phase();
            const cxd e = std::pow(s, 1.0 / P.q) * rng.unit_phase();
            const double expect = (2.0 + P.delta) * s;
            if (std::abs(bellman::Q_eval(z, e, P) - expect) > 1e-12 * (1.0 + expect)) {
                ok = false;
                detail = "C0 gluing failed at s=" + fmt17(s);
            }
        }

        // C1 gluing: second-order one-sided derivative estimates from either
        // side of the surface agree within 5 * step
        const double step = 1e-6;
        for (int k = 0; k < 1000 && ok; ++k) {
            const double s = rng.log_uniform(0.5, 2.0);
            const cxd z = std::pow(s, 1.0 / P.p) * rng.unit_phase();
            const cxd e = std::pow(s, 1.0 / P.q) * rng.unit_phase();
            for (int coord = 0; coord < 2; ++coord) {
                const cxd dir = coord == 0 ? cxd(1, 0) : cxd(0, 1);
                const auto q_at = [&](double t) {
                    return bellman::Q_eval(z + t * dir, e, P);
                };
                const double right =
                    (4.0 * q_at(step) - q_at(2 * step) - 3.0 * q_at(0)) / (2 * step);
                const double left =
                    (3.0 * q_at(0) - 4.0 * q_at(-step) + q_at(-2 * step)) / (2 * step);
                const double scale = 1.0 + std::abs(right) + std::abs(left);
                if (std::abs(right - left) > 5.0 * scale * step) {
                    ok = false;
                    detail = "C1 gluing failed, jump " + fmt17(std::abs(right - left));
                }
            }
        }

        // upper bound on 1e5 samples
        for (int k = 0; k < 100000 && ok; ++k) {
            const cxd z = rng.log_uniform(1e-3, 1e3) * rng.unit_phase();
            const cxd e = rng.log_uniform(1e-3, 1e3) * rng.unit_phase();
            const double bound =
                (1.0 + P.delta) *
                (std::pow(std::abs(z), P.p) + std::pow(std::abs(e), P.q));
            if (bellman::Q_eval(z, e, P) > bound * (1 + 1e-12)) {
                ok = false;
                detail = "upper bound violated";
            }
        }

        // gradient products against finite differences (radial logarithmic FD)
        for (int k = 0; k < 300 && ok; ++k) {
            const cxd z = rng.log_uniform(0.3, 3.0) * rng.unit_phase();
            const cxd e = rng.log_uniform(0.3, 3.0) * rng.unit_phase();
            const auto pt = bellman::classify(z, e, P);
            if (pt.region == bellman::Region::OnUpsilon) continue;
            const double a = std::pow(std::abs(z), P.p);
            const double b = std::pow(std::abs(e), P.q);
            if (std::abs(a - b) < 1e-3 * (1 + b)) continue;
            const auto [gz, ge] = bellman::Q_gradient_products(pt, P);
            const double h = 1e-6;
            const double fd_z = (bellman::Q_eval(z * std::exp(h), e, P) -
                                 bellman::Q_eval(z * std::exp(-h), e, P)) /
                                (2 * h);
            const double fd_e = (bellman::Q_eval(z, e * std::exp(h), P) -
                                 bellman::Q_eval(z, e * std::exp(-h), P)) /
                                (2 * h);
            if (std::abs(2 * gz - fd_z) > 1e-5 * (1 + std::abs(fd_z)) ||
                std::abs(2 * ge - fd_e) > 1e-5 * (1 + std::abs(fd_e))) {
                ok = false;
                detail = "gradient product FD mismatch";
            }
        }
    }
    if (ok) detail = "C0/C1 gluing, upper bound, gradient products across p in {2,3,4}";
    report(3, "Bellman structural suite", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    struct Config {
        std::string name;
        ComplexMatrix A;
        ComplexMatrix B;
        double p;
    };
    Rng rng(2027);
    std::vector<Config> configs;
    configs.push_back({"(4, 1, 1)", ComplexMatrix::identity(1), ComplexMatrix::identity(1), 4.0});
    configs.push_back({"(4, e^{i pi/8} I, I)",
                       ComplexMatrix::rotation(ComplexMatrix::identity(2), kPi / 8),
                       ComplexMatrix::identity(2), 4.0});
    configs.push_back({"(3, real elliptic pair)", random_real_elliptic(rng, 2),
                       random_real_elliptic(rng, 2), 3.0});

    std::string measured;
    for (const auto& cfg : configs) {
        const double delta = bellman::choose_delta(cfg.p, cfg.A, cfg.B);
        const bellman::BellmanParams P(cfg.p, delta);
        const auto cert = bellman::verify_convexity(cfg.A, cfg.B, P, 100000, 31415, 1);
        if (!(cert.c_hess > 0.0 && cert.c_gz > 0.0 && cert.c_ge > 0.0)) {
            ok = false;
            detail = cfg.name + " gave nonpositive constants";
        }
        measured += cfg.name + " c_hess=" + fmt17(cert.c_hess) + " ";
        if (cfg.name == "(4, 1, 1)") g_c_hess_model = cert.c_hess;
    }

    // scalar failing p-ellipticity: the search must find negativity
    const auto bad = scalar_rotation(1.2);
    const bellman::BellmanParams Pbad(8.0, 0.1);
    const auto bad_cert = bellman::verify_convexity(bad, bad, Pbad, 100000, 31415, 1);
    if (!(bad_cert.c_hess < 0.0)) {
        ok = false;
        detail = "violator not detected";
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 60.0) {
        ok = false;
        detail = "runtime " + fmt17(elapsed) + " s";
    }
    if (ok) detail = measured + "violator c_hess=" + fmt17(bad_cert.c_hess) + ", " +
                     fmt17(elapsed) + " s";
    report(4, "convexity certificate over 1e5 seeded samples", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    const auto I2 = ComplexMatrix::identity(2);
    const double delta = bellman::choose_delta(4.0, I2, I2);
    const bellman::BellmanParams P(4.0, delta);

    double worst = std::numeric_limits<double>::infinity();
    for (double kappa : {0.1, 0.01}) {
        const auto cert = bellman::mollified_certificate(I2, I2, P, kappa, 8, 100, 27182);
        worst = std::min(worst, cert.min_ratio);
        if (!(cert.min_ratio >= 0.9)) {
            ok = false;
            detail = "kappa=" + fmt17(kappa) + " min ratio " + fmt17(cert.min_ratio);
        }
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 120.0) {
        ok = false;
        detail = "runtime " + fmt17(elapsed) + " s";
    }
    if (ok) detail = "min ratio " + fmt17(worst) + " over kappa in {0.1, 0.01}, " +
                     fmt17(elapsed) + " s";
    report(5, "mollified convexity certificate at 100 points", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_6() {
    Rng rng(2028);
    bool ok = true;
    std::string detail;

    // Hessian of |zeta|^p against finite differences
    double worst_fp = 0.0;
    for (double p : {2.0, 3.0, 4.0, 7.0}) {
        for (int k = 0; k < 50; ++k) {
            const cxd z = rng.log_uniform(0.3, 3.0) * rng.unit_phase();
            const cxd xi = rng.complex_normal();
            const double step = 1e-5;
            const auto F = [&](cxd w) { return std::pow(std::abs(w), p); };
            const double hxx = (F(z + step) - 2 * F(z) + F(z - step)) / (step * step);
            const double hyy =
                (F(z + cxd(0, step)) - 2 * F(z) + F(z - cxd(0, step))) / (step * step);
            const double hxy = (F(z + cxd(step, step)) - F(z + cxd(step, -step)) -
                                F(z + cxd(-step, step)) + F(z + cxd(-step, -step))) /
                               (4 * step * step);
            const cxd expected(hxx * xi.real() + hxy * xi.imag(),
                               hxy * xi.real() + hyy * xi.imag());
            const cxd got = bellman::hessian_Fp(z, {xi}, p)[0];
            worst_fp = std::max(worst_fp, std::abs(got - expected) / (1 + std::abs(expected)));
        }
    }
    if (worst_fp > 1e-4) {
        ok = false;
        detail = "Hessian of |z|^p FD mismatch " + fmt17(worst_fp);
    }

    // p=2 generalized Hessian identity, exact to 1e-10
    const bellman::BellmanParams P2(2.0, 0.1);
    double worst_p2 = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int d = 1 + k % 3;
        ComplexMatrix A(d), B(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                A(i, j) = rng.complex_normal();
                B(i, j) = rng.complex_normal();
            }
        bellman::HessianDirection om;
        om.omega1 = rng.unit_vector(d);
        om.omega2 = rng.unit_vector(d);
        cxd z, e;
        bellman::BellmanPoint pt{0, 0, bellman::Region::OnUpsilon};
        do {
            z = rng.log_uniform(0.1, 10.0) * rng.unit_phase();
            e = rng.log_uniform(0.1, 10.0) * rng.unit_phase();
            pt = bellman::classify(z, e, P2);
        } while (pt.region == bellman::Region::OnUpsilon);
        cxd aw(0, 0), bw(0, 0);
        const cvec Aw = A.apply(om.omega1);
        const cvec Bw = B.apply(om.omega2);
        for (int j = 0; j < d; ++j) {
            aw += Aw[j] * std::conj(om.omega1[j]);
            bw += Bw[j] * std::conj(om.omega2[j]);
        }
        const double expect = 2 * (1 + P2.delta) * aw.real() + 2 * bw.real();
        worst_p2 = std::max(worst_p2, std::abs(bellman::generalized_hessian(A, B, pt, om, P2) -
                                               expect));
    }
    if (worst_p2 > 1e-10) {
        ok = false;
        detail = "p=2 Hessian identity off by " + fmt17(worst_p2);
    }

    // chain-rule residual is O(h): observed order >= 0.9 between 1/64 and 1/128
    double orders_min = std::numeric_limits<double>::infinity();
    for (double p : {3.0, 4.0}) {
        double res[2];
        int idx = 0;
        for (int n : {64, 128}) {
            const double h = 1.0 / n;
            cvec f(n);
            for (int i = 0; i < n; ++i) {
                const double x = i * h;
                f[i] = std::exp(cxd(0, 1) * x) * (1.0 + 0.5 * x);
            }
            res[idx++] = bellman::grad_power_identity(f, h, p);
        }
        orders_min = std::min(orders_min, std::log2(res[0] / res[1]));
    }
    if (orders_min < 0.9) {
        ok = false;
        detail = "observed order " + fmt17(orders_min);
    }

    if (ok)
        detail = "|z|^p FD " + fmt17(worst_fp) + ", p=2 identity " + fmt17(worst_p2) +
                 ", chain-rule order " + fmt17(orders_min);
    report(6, "Hessian identities and chain-rule residual order", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_7() {
    bool ok = true;
    std::string detail;

    // heat decay on 129 cells
    const int n = 129;
    const GridDomain g = dirichlet_interval(n);
    const auto L = semigroup::assemble(g, scalar_field(1.0, g), rvec(n, 0.0), 0.0);
    const cvec f = sine_mode(g);
    double fn = 0.0;
    for (cxd z : f) fn += abs2(z);
    fn = std::sqrt(fn * g.cell_volume());
    double worst_decay = 0.0;
    for (double t : {0.1, 0.3}) {
        const int steps = 64;
        const cvec u = semigroup_apply(L, f, t, steps);
        const double decay = std::exp(-kPi * kPi * t);
        double err = 0.0;
        for (int i = 0; i < n; ++i) err += abs2(u[i] - decay * f[i]);
        err = std::sqrt(err * g.cell_volume());
        const double dt = t / steps;
        const double tol = 2.0 * (g.h() * g.h() + dt * dt) * fn;
        worst_decay = std::max(worst_decay, err / tol);
        if (err > tol) {
            ok = false;
            detail = "decay error " + fmt17(err) + " > " + fmt17(tol);
        }
    }

    // real-coefficient L^p contraction
    const auto Lreal = semigroup::assemble(g, wavy_field(g), rvec(n, 0.4), 0.0);
    for (double p : {1.5, 2.0, 3.0, 10.0}) {
        const double ratio =
            semigroup::contractivity_experiment(Lreal, p, 0.0, {0.01, 0.1}, 5, 2029);
        if (ratio > 1.0 + 1e-8) {
            ok = false;
            detail = "real contraction ratio " + fmt17(ratio) + " at p=" + fmt17(p);
        }
    }

    // complex p-elliptic scalar: mesh-dependent tolerance with C decreasing
    const cxd a(std::cos(kPi / 6), std::sin(kPi / 6));
    std::vector<double> Cs;
    for (int m : {31, 63, 127}) {
        const GridDomain gm = dirichlet_interval(m);
        const auto Lm =
            semigroup::assemble(gm, scalar_field(a, gm), rvec(gm.n_cells(), 0.0), 0.0);
        const double ratio =
            semigroup::contractivity_experiment(Lm, 4.0, 0.0, {0.01, 0.1}, 5, 2030);
        Cs.push_back(std::max(ratio - 1.0, 0.0) / gm.h());
    }
    if (!(Cs[1] <= Cs[0] + 1e-9 && Cs[2] <= Cs[1] + 1e-9)) {
        ok = false;
        detail = "C(h) not decreasing: " + fmt17(Cs[0]) + ", " + fmt17(Cs[1]) + ", " +
                 fmt17(Cs[2]);
    }

    // rotated L2 contractivity within the admissible phase range
    const MatrixField Fw = wavy_field(g);
    const double omega0 = ellipticity::sector_angle(Fw);
    const double phi = 0.9 * (kPi / 2 - omega0);
    const auto Lrot = semigroup::assemble(g, Fw, rvec(n, 0.2), phi);
    const double r2 = semigroup::contractivity_experiment(Lrot, 2.0, phi, {0.01, 0.1, 0.5},
                                                          5, 2031);
    if (r2 > 1.0 + 1e-10) {
        ok = false;
        detail = "rotated L2 ratio " + fmt17(r2);
    }

    if (ok)
        detail = "decay margin " + fmt17(worst_decay) + ", C(h) = {" + fmt17(Cs[0]) + ", " +
                 fmt17(Cs[1]) + ", " + fmt17(Cs[2]) + "}, rotated L2 ratio " + fmt17(r2);
    report(7, "semigroup suite on 129 cells", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_8() {
    bool ok = true;
    std::string detail;
    const int n = 127;
    const GridDomain g = dirichlet_interval(n);

    struct Config {
        std::string name;
        MatrixField F;
        double p;
    };
    std::vector<Config> coherent;
    coherent.push_back({"real p=1.5", wavy_field(g), 1.5});
    coherent.push_back({"real p=3", wavy_field(g), 3.0});
    coherent.push_back({"complex p=2", scalar_field(cxd(std::cos(kPi / 5), std::sin(kPi / 5)), g),
                        2.0});

    std::string summary;
    for (const auto& cfg : coherent) {
        const auto L = semigroup::assemble(g, cfg.F, rvec(n, 0.1), 0.0);
        const double dmin = semigroup::dissipativity_check(L, cfg.p, 20, 2032);
        const double ratio =
            semigroup::contractivity_experiment(L, cfg.p, 0.0, {0.01, 0.1}, 5, 2033);
        if (!(dmin >= -1e-10 && ratio <= 1.0 + 1e-8)) {
            ok = false;
            detail = cfg.name + ": diss " + fmt17(dmin) + ", ratio " + fmt17(ratio);
        }
        summary += cfg.name + " (diss " + fmt17(dmin) + ", ratio-1 " + fmt17(ratio - 1) + ") ";
    }

    // a configuration with Delta_p < 0 exhibits negative dissipativity
    const cxd bad(std::cos(1.45), std::sin(1.45));
    const auto Lbad = semigroup::assemble(g, scalar_field(bad, g), rvec(n, 0.0), 0.0);
    const double dbad = semigroup::dissipativity_check(Lbad, 8.0, 20, 2034);
    if (!(dbad < 0.0)) {
        ok = false;
        detail = "violator dissipativity " + fmt17(dbad) + " not negative";
    }

    if (ok) detail = summary + "violator diss " + fmt17(dbad);
    report(8, "dissipativity/contractivity coherence", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_9() {
    bool ok = true;
    std::string detail;

    std::vector<double> ratios;
    semigroup::EmbeddingReport base;
    for (int n : {65, 129, 257}) {
        const GridDomain g = dirichlet_interval(n);
        const auto L = semigroup::assemble(g, scalar_field(1.0, g), rvec(n, 0.0), 0.0);
        const cvec f = sine_mode(g);
        const auto rep = semigroup::bilinear_embedding(L, L, f, f, 3.0, {});
        if (!(rep.value > 0.0) || !std::isfinite(rep.value)) {
            ok = false;
            detail = "integral not finite/positive at n=" + std::to_string(n);
        }
        ratios.push_back(rep.ratio);
        if (n == 129) base = rep;
    }

    const double spread =
        (*std::max_element(ratios.begin(), ratios.end()) -
         *std::min_element(ratios.begin(), ratios.end())) /
        ratios[1];
    if (spread >= 0.10) {
        ok = false;
        detail = "mesh spread " + fmt17(spread);
    }

    {
        const int n = 129;
        const GridDomain g = dirichlet_interval(n);
        const auto L = semigroup::assemble(g, scalar_field(1.0, g), rvec(n, 0.0), 0.0);
        const cvec f = sine_mode(g);

        semigroup::TimeGridSpec doubled;
        doubled.tail_fraction = 0.0;
        doubled.t_cap = 2.0 * base.T_max;
        const auto rep2 = semigroup::bilinear_embedding(L, L, f, f, 3.0, doubled);
        if (std::abs(rep2.value - base.value) > 0.01 * base.value) {
            ok = false;
            detail = "T_max doubling changed the value by " +
                     fmt17(std::abs(rep2.value - base.value) / base.value);
        }

        cvec fs = f, gs = f;
        for (auto& z : fs) z *= 3.7;
        for (auto& z : gs) z /= 3.7;
        const auto rep3 = semigroup::bilinear_embedding(L, L, fs, gs, 3.0, {});
        if (std::abs(rep3.ratio - base.ratio) > 1e-12 * base.ratio) {
            ok = false;
            detail = "scaling invariance off by " +
                     fmt17(std::abs(rep3.ratio - base.ratio) / base.ratio);
        }
    }

    if (ok)
        detail = "ratios {" + fmt17(ratios[0]) + ", " + fmt17(ratios[1]) + ", " +
                 fmt17(ratios[2]) + "}, spread " + fmt17(spread);
    report(9, "bilinear functional stability", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_10() {
    bool ok = true;
    std::string detail;

    const int n = 129;
    const GridDomain g = dirichlet_interval(n);
    const auto L = semigroup::assemble(g, scalar_field(1.0, g), rvec(n, 0.0), 0.0);
    const cvec f = sine_mode(g);
    const bellman::BellmanParams P(4.0, 0.2);

    semigroup::TimeGridSpec grid;
    grid.rho = 1.02;
    const auto tr = semigroup::flow_trace(L, L, f, f, P, grid);

    bool nonincreasing = true;
    for (std::size_t k = 1; k < tr.E.size(); ++k)
        if (tr.E[k] > tr.E[k - 1] + 1e-8 * tr.E.front()) nonincreasing = false;
    if (!nonincreasing) {
        ok = false;
        detail = "E increased along the flow";
    }

    double worst_rel = 0.0;
    double papar_margin = std::numeric_limits<double>::infinity();
    const double c_hess = g_c_hess_model;
    int checked = 0;
    for (std::size_t k = 1; k + 1 < tr.times.size(); ++k) {
        const double t = tr.times[k];
        if (t < 0.005 || t > 0.2) continue;
        const double lhs = -tr.dE_numeric[k];
        const double rhs = tr.I1[k] + tr.I2[k];
        worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / std::abs(rhs));
        papar_margin = std::min(papar_margin, lhs / (0.5 * c_hess * tr.integrand_lower[k]));
        ++checked;
    }
    if (checked < 20) {
        ok = false;
        detail = "too few interior times";
    }
    if (worst_rel > 1e-3) {
        ok = false;
        detail = "-dE/dt vs I1+I2 relative error " + fmt17(worst_rel);
    }
    if (!(papar_margin >= 1.0)) {
        ok = false;
        detail = "lower-bound margin " + fmt17(papar_margin) + " below 1";
    }

    if (ok)
        detail = "FD consistency " + fmt17(worst_rel) + ", lower-bound margin " +
                 fmt17(papar_margin) + " (c_hess " + fmt17(c_hess) + ")";
    report(10, "heat-flow derivative decomposition", ok, detail);
}

// ---------------------------------------------------------------------------
void criterion_11() {
    bool ok = true;
    std::string detail;
    Rng rng(2035);

    const int n = 127;
    const GridDomain g = dirichlet_interval(n);
    const MatrixField A = scalar_field(1.0, g);
    cvec f(n);
    for (auto& z : f) z = rng.complex_normal();

    rvec V(n);
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
        V[i] = 1.0 / g.coordinates(i)[0];
        vmax = std::max(vmax, V[i]);
    }
    const auto table =
        semigroup::truncation_convergence(g, A, V, 1.0, f, {1, 2, 4, 8, 16, 32, 64, 128, 256});
    for (std::size_t k = 1; k < table.n.size(); ++k) {
        if (table.e_grad[k] > table.e_grad[k - 1] + 1e-12 ||
            table.e_pot[k] > table.e_pot[k - 1] + 1e-12) {
            ok = false;
            detail = "errors not monotone at n=" + fmt17(table.n[k]);
        }
        if (table.n[k] >= vmax && (table.e_grad[k] > 1e-10 || table.e_pot[k] > 1e-10)) {
            ok = false;
            detail = "errors above 1e-10 past max V";
        }
    }

    for (int trial = 0; trial < 10 && ok; ++trial) {
        rvec Vr(n);
        for (auto& v : Vr) v = 40.0 * rng.uniform();
        cvec fr(n);
        for (auto& z : fr) z = rng.complex_normal();
        const auto t =
            semigroup::truncation_convergence(g, A, Vr, 1.0, fr, {1, 2, 4, 8, 16, 32, 64});
        for (std::size_t k = 1; k < t.n.size(); ++k)
            if (t.e_grad[k] > t.e_grad[k - 1] + 1e-12 ||
                t.e_pot[k] > t.e_pot[k - 1] + 1e-12) {
                ok = false;
                detail = "random potential " + std::to_string(trial) + " not monotone";
            }
    }

    if (ok)
        detail = "1/x errors decay from " + fmt17(table.e_grad.front()) + " to 0, 10 random "
                 "potentials monotone";
    report(11, "potential truncation convergence", ok, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("%s: %d of 11 criteria failed\n", g_failures == 0 ? "SUCCESS" : "FAILURE",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
