#include "pellab/numerics/lp_project.hpp"

#include <algorithm>
#include <cmath>

namespace pellab::numerics {

double lp_norm_weighted(const cvec& u, double p, double cell_volume) {
    if (!(cell_volume > 0.0)) throw ParameterError("lp_norm_weighted: cell_volume must be > 0");
    if (!(p >= 1.0)) throw ParameterError("lp_norm_weighted: p must be >= 1");
    double s = 0.0;
    for (cxd z : u) s += std::pow(std::abs(z), p);
    return std::pow(cell_volume * s, 1.0 / p);
}

namespace {

// Solves t + mu * t^(p-1) = r for t in [0, r]; monotone in t.
double radial_component(double r, double mu, double p) {
    if (r == 0.0 || mu == 0.0) return r;
    double lo = 0.0, hi = r;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double val = mid + mu * std::pow(mid, p - 1.0) - r;
        (val > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

cvec project_lp_ball(const cvec& u, double p, double cell_volume) {
    if (!(p > 1.0)) throw ParameterError("project_lp_ball: p must be > 1");
    if (!(cell_volume > 0.0)) throw ParameterError("project_lp_ball: cell_volume must be > 0");

    if (lp_norm_weighted(u, p, cell_volume) <= 1.0) return u;

    const std::size_t n = u.size();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = std::abs(u[i]);

    auto norm_at = [&](double mu) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += std::pow(radial_component(r[i], mu, p), p);
        return std::pow(cell_volume * s, 1.0 / p);
    };

    // The p-norm of the candidate decreases monotonically in mu. Bracket
    // starting from the l2 magnitude of u, doubling as a safeguard.
    double lo = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) s2 += r[i] * r[i];
    double hi = std::max(std::sqrt(s2), 1.0);
    int guard = 0;
    while (norm_at(hi) > 1.0 && guard++ < 200) hi *= 2.0;

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (norm_at(mid) > 1.0 ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);

    cvec v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = radial_component(r[i], mu, p);
        v[i] = r[i] > 0.0 ? u[i] * (t / r[i]) : cxd(0.0, 0.0);
    }
    return v;
}

}  // namespace pellab::numerics
