#include "pellab/bellman/bellman.hpp"

#include <cmath>

namespace pellab::bellman {

BellmanParams::BellmanParams(double p_in, double delta_in)
    : p(p_in), q(p_in / (p_in - 1.0)), delta(delta_in) {
    if (!(p >= 2.0)) throw ParameterError("BellmanParams: p must be >= 2");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("BellmanParams: delta in (0,1)");
}

BellmanPoint classify(cxd zeta, cxd eta, const BellmanParams& params) {
    const double a = std::pow(std::abs(zeta), params.p);
    const double b = std::pow(std::abs(eta), params.q);
    Region region;
    if (std::abs(eta) == 0.0 || std::abs(a - b) <= 1e-14 * (1.0 + b)) {
        region = Region::OnUpsilon;
    } else {
        region = a > b ? Region::AboveDiag : Region::BelowDiag;
    }
    return {zeta, eta, region};
}

namespace {

// Branch data for Q = g(u, v), u = |zeta|, v = |eta|, together with the
// partial derivatives needed for gradients and the 4x4 Hessian.
struct BranchEval {
    double value;
    double gu, gv;          // dg/du, dg/dv
    double gu_over_u;       // finite at u = 0 for p >= 2
    double gv_over_v;
    double guu, gvv, guv;
};

BranchEval eval_above(double u, double v, const BellmanParams& P) {
    const double p = P.p, q = P.q, d = P.delta;
    const double ca = 1.0 + 2.0 * d / p;
    const double cb = 1.0 + d * (2.0 / q - 1.0);
    const double up2 = std::pow(u, p - 2.0);
    const double vq2 = std::pow(v, q - 2.0);
    BranchEval e;
    e.value = ca * std::pow(u, p) + cb * std::pow(v, q);
    e.gu = ca * p * std::pow(u, p - 1.0);
    e.gv = cb * q * std::pow(v, q - 1.0);
    e.gu_over_u = ca * p * up2;
    e.gv_over_v = cb * q * vq2;  // diverges as v -> 0; v = 0 lies on Upsilon
    e.guu = ca * p * (p - 1.0) * up2;
    e.gvv = cb * q * (q - 1.0) * vq2;
    e.guv = 0.0;
    return e;
}

BranchEval eval_below(double u, double v, const BellmanParams& P) {
    const double p = P.p, q = P.q, d = P.delta;
    const double up2 = std::pow(u, p - 2.0);
    const double v2q = std::pow(v, 2.0 - q);
    BranchEval e;
    e.value = std::pow(u, p) + std::pow(v, q) + d * u * u * v2q;
    e.gu = p * std::pow(u, p - 1.0) + 2.0 * d * u * v2q;
    e.gv = q * std::pow(v, q - 1.0) + d * (2.0 - q) * u * u * std::pow(v, 1.0 - q);
    e.gu_over_u = p * up2 + 2.0 * d * v2q;
    e.gv_over_v = q * std::pow(v, q - 2.0) + d * (2.0 - q) * u * u * std::pow(v, -q);
    e.guu = p * (p - 1.0) * up2 + 2.0 * d * v2q;
    e.gvv = q * (q - 1.0) * std::pow(v, q - 2.0) +
            d * (2.0 - q) * (1.0 - q) * u * u * std::pow(v, -q);
    e.guv = 2.0 * d * (2.0 - q) * u * std::pow(v, 1.0 - q);
    return e;
}

BranchEval eval_branch(Region r, double u, double v, const BellmanParams& P) {
    return r == Region::BelowDiag ? eval_below(u, v, P) : eval_above(u, v, P);
}

Region forced_region(cxd zeta, cxd eta, const BellmanParams& P) {
    const double a = std::pow(std::abs(zeta), P.p);
    const double b = std::pow(std::abs(eta), P.q);
    return a >= b ? Region::AboveDiag : Region::BelowDiag;
}

}  // namespace

double Q_eval(const BellmanPoint& sigma, const BellmanParams& params) {
    const double u = std::abs(sigma.zeta), v = std::abs(sigma.eta);
    if (sigma.region == Region::OnUpsilon && v > 0.0) {
        const double above = eval_above(u, v, params).value;
        const double below = eval_below(u, v, params).value;
        if (std::abs(above - below) > 1e-12 * (1.0 + std::abs(above)))
            throw RegionError("Q_eval: branch mismatch on the gluing set");
        return above;
    }
    return eval_branch(sigma.region == Region::OnUpsilon ? Region::AboveDiag : sigma.region,
                       u, v, params)
        .value;
}

double Q_eval(cxd zeta, cxd eta, const BellmanParams& params) {
    return Q_eval(classify(zeta, eta, params), params);
}

std::pair<double, double> Q_gradient_products(const BellmanPoint& sigma,
                                              const BellmanParams& params) {
    if (sigma.region == Region::OnUpsilon)
        throw RegionError("Q_gradient_products: point lies on Upsilon");
    const double u = std::abs(sigma.zeta), v = std::abs(sigma.eta);
    const BranchEval e = eval_branch(sigma.region, u, v, params);
    return {0.5 * u * e.gu, 0.5 * v * e.gv};
}

std::pair<cxd, cxd> Q_wirtinger(const BellmanPoint& sigma, const BellmanParams& params) {
    if (sigma.region == Region::OnUpsilon)
        throw RegionError("Q_wirtinger: point lies on Upsilon");
    return Q_wirtinger_forced(sigma.zeta, sigma.eta, params);
}

std::pair<cxd, cxd> Q_wirtinger_forced(cxd zeta, cxd eta, const BellmanParams& params) {
    const double u = std::abs(zeta), v = std::abs(eta);
    const BranchEval e = eval_branch(forced_region(zeta, eta, params), u, v, params);
    const cxd dz = 0.5 * e.gu * std::conj(csign(zeta));
    const cxd de = 0.5 * e.gv * std::conj(csign(eta));
    return {dz, de};
}

std::array<std::array<double, 4>, 4> Q_hessian4(const BellmanPoint& sigma,
                                                const BellmanParams& params) {
    if (sigma.region == Region::OnUpsilon)
        throw RegionError("Q_hessian4: point lies on Upsilon");
    const double u = std::abs(sigma.zeta), v = std::abs(sigma.eta);
    const BranchEval e = eval_branch(sigma.region, u, v, params);

    // Radial/tangential split of the Hessian of a function of |.|:
    //   D^2 = g_rr * rho rho' + (g_r / r) (I - rho rho')  per 2x2 block.
    const double r1x = u > 0.0 ? sigma.zeta.real() / u : 0.0;
    const double r1y = u > 0.0 ? sigma.zeta.imag() / u : 0.0;
    const double r2x = v > 0.0 ? sigma.eta.real() / v : 0.0;
    const double r2y = v > 0.0 ? sigma.eta.imag() / v : 0.0;

    std::array<std::array<double, 4>, 4> H{};
    const double t1 = e.gu_over_u;
    const double t2 = e.gv_over_v;

    H[0][0] = e.guu * r1x * r1x + t1 * (1.0 - r1x * r1x);
    H[0][1] = (e.guu - t1) * r1x * r1y;
    H[1][1] = e.guu * r1y * r1y + t1 * (1.0 - r1y * r1y);
    H[1][0] = H[0][1];

    H[2][2] = e.gvv * r2x * r2x + t2 * (1.0 - r2x * r2x);
    H[2][3] = (e.gvv - t2) * r2x * r2y;
    H[3][3] = e.gvv * r2y * r2y + t2 * (1.0 - r2y * r2y);
    H[3][2] = H[2][3];

    H[0][2] = e.guv * r1x * r2x;
    H[0][3] = e.guv * r1x * r2y;
    H[1][2] = e.guv * r1y * r2x;
    H[1][3] = e.guv * r1y * r2y;
    H[2][0] = H[0][2];
    H[3][0] = H[0][3];
    H[2][1] = H[1][2];
    H[3][1] = H[1][3];
    return H;
}

std::array<std::array<double, 4>, 4> Q_hessian4_fd(cxd zeta, cxd eta,
                                                   const BellmanParams& params, double step) {
    const auto val = [&](double x0, double x1, double x2, double x3) {
        return Q_eval(cxd(x0, x1), cxd(x2, x3), params);
    };
    const std::array<double, 4> c = {zeta.real(), zeta.imag(), eta.real(), eta.imag()};
    std::array<std::array<double, 4>, 4> H{};
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            std::array<double, 4> x = c;
            double d2;
            if (i == j) {
                x[i] = c[i] + step;
                const double fp = val(x[0], x[1], x[2], x[3]);
                x[i] = c[i] - step;
                const double fm = val(x[0], x[1], x[2], x[3]);
                d2 = (fp - 2.0 * val(c[0], c[1], c[2], c[3]) + fm) / (step * step);
            } else {
                double s = 0.0;
                for (int si = -1; si <= 1; si += 2)
                    for (int sj = -1; sj <= 1; sj += 2) {
                        x = c;
                        x[i] = c[i] + si * step;
                        x[j] = c[j] + sj * step;
                        s += si * sj * val(x[0], x[1], x[2], x[3]);
                    }
                d2 = s / (4.0 * step * step);
            }
            H[i][j] = d2;
            H[j][i] = d2;
        }
    return H;
}

cvec hessian_Fp(cxd zeta, const cvec& xi, double p) {
    if (!(p > 1.0)) throw ParameterError("hessian_Fp: p must be > 1");
    if (p < 2.0 && std::abs(zeta) == 0.0)
        throw SingularityError("hessian_Fp: zeta = 0 with p < 2", {});
    if (p == 2.0) {
        cvec out(xi.size());
        for (std::size_t j = 0; j < xi.size(); ++j) out[j] = 2.0 * xi[j];
        return out;
    }
    const double scale = 0.5 * p * p * std::pow(std::abs(zeta), p - 2.0);
    const cxd s = csign(zeta);
    cvec out(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j)
        out[j] = scale * s * ellipticity::apply_Ip(std::conj(s) * xi[j], p);
    return out;
}

double generalized_hessian(const ellipticity::ComplexMatrix& A,
                           const ellipticity::ComplexMatrix& B, const BellmanPoint& sigma,
                           const HessianDirection& omega, const BellmanParams& params) {
    if (A.dim() != B.dim()) throw StructuralError("generalized_hessian: dimension mismatch");
    if (omega.omega1.size() != omega.omega2.size() ||
        static_cast<int>(omega.omega1.size()) != A.dim())
        throw StructuralError("generalized_hessian: direction dimension mismatch");

    const auto H = Q_hessian4(sigma, params);
    const cvec Aw1 = A.apply(omega.omega1);
    const cvec Bw2 = B.apply(omega.omega2);

    double total = 0.0;
    for (std::size_t j = 0; j < omega.omega1.size(); ++j) {
        const std::array<double, 4> w = {omega.omega1[j].real(), omega.omega1[j].imag(),
                                         omega.omega2[j].real(), omega.omega2[j].imag()};
        const std::array<double, 4> wh = {Aw1[j].real(), Aw1[j].imag(), Bw2[j].real(),
                                          Bw2[j].imag()};
        for (int r = 0; r < 4; ++r) {
            double hw = 0.0;
            for (int c = 0; c < 4; ++c) hw += H[r][c] * w[c];
            total += hw * wh[r];
        }
    }
    return total;
}

double grad_power_identity(const cvec& f, double h, double p) {
    if (!(p > 1.0)) throw ParameterError("grad_power_identity: p must be > 1");
    if (!(h > 0.0)) throw ParameterError("grad_power_identity: h must be > 0");
    if (f.size() < 2) throw StructuralError("grad_power_identity: need at least two samples");

    if (p < 2.0) {
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (std::abs(f[i]) == 0.0) bad.push_back(i);
        if (!bad.empty())
            throw SingularityError("grad_power_identity: |f| vanishes with p < 2", bad);
    }

    const auto power = [&](cxd z) {
        const double m = std::abs(z);
        return m == 0.0 ? cxd(0.0, 0.0) : std::pow(m, p - 2.0) * z;
    };

    double worst = 0.0;
    double scale = 0.0;
    std::vector<cxd> rhs(f.size() - 1), lhs(f.size() - 1);
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        lhs[i] = (power(f[i + 1]) - power(f[i])) / h;
        const cxd grad = (f[i + 1] - f[i]) / h;
        const cxd s = csign(f[i]);
        rhs[i] = 0.5 * p * std::pow(std::abs(f[i]), p - 2.0) * s *
                 ellipticity::apply_Ip(std::conj(s) * grad, p);
        scale = std::max(scale, std::abs(rhs[i]));
    }
    for (std::size_t i = 0; i < rhs.size(); ++i)
        worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    return worst / std::max(scale, 1e-300);
}

}  // namespace pellab::bellman
