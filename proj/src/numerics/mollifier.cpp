#include "pellab/numerics/mollifier.hpp"

#include <cmath>
#include <string>

namespace pellab::numerics {

namespace {

double bump_profile(double r2) {
    // exp(-1/(1-r^2)) for r^2 < 1, else 0. r2 slightly above 1 underflows
    // cleanly through the guard.
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}

// Normalization so that the R^4 integral of the bump is exactly 1:
// integral = |S^3| * int_0^1 r^3 exp(-1/(1-r^2)) dr, |S^3| = 2 pi^2.
// Computed once with a composite Gauss-Legendre rule on the radial integral.
double compute_normalization() {
    std::vector<double> nodes, weights;
    gauss_legendre(48, nodes, weights);
    const int panels = 64;
    double radial = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels;
        const double b = static_cast<double>(p + 1) / panels;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            const double r = mid + half * nodes[k];
            radial += half * weights[k] * r * r * r * bump_profile(r * r);
        }
    }
    const double two_pi_sq = 2.0 * 9.869604401089358618834490999876;
    return 1.0 / (two_pi_sq * radial);
}

double normalization_constant() {
    static const double c = compute_normalization();
    return c;
}

}  // namespace

Mollifier::Mollifier(double kappa) : kappa_(kappa) {
    if (!(kappa > 0.0)) throw ParameterError("Mollifier: kappa must be > 0");
}

double Mollifier::normalization() const { return normalization_constant(); }

double Mollifier::value(const std::array<double, 4>& y) const {
    const double k = kappa_;
    double r2 = 0.0;
    for (double c : y) r2 += (c / k) * (c / k);
    const double k4 = k * k * k * k;
    return normalization_constant() * bump_profile(r2) / k4;
}

double mollifier_value(const std::array<double, 4>& y, double kappa) {
    return Mollifier(kappa).value(y);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev-like initial guess.
        double x = std::cos(3.141592653589793238462643383279 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

double convolve4(const std::function<double(const std::array<double, 4>&)>& f,
                 const std::array<double, 4>& x, double kappa, int nodes_per_axis) {
    if (nodes_per_axis < 5) throw ParameterError("convolve4: nodes_per_axis must be >= 5");
    const Mollifier phi(kappa);

    std::vector<double> nodes, weights;
    gauss_legendre(nodes_per_axis, nodes, weights);
    const int n = nodes_per_axis;

    double total = 0.0;
    std::array<double, 4> y{};
    for (int i0 = 0; i0 < n; ++i0) {
        y[0] = kappa * nodes[i0];
        for (int i1 = 0; i1 < n; ++i1) {
            y[1] = kappa * nodes[i1];
            const double r01 = y[0] * y[0] + y[1] * y[1];
            if (r01 >= kappa * kappa) continue;  // outside the support ball
            for (int i2 = 0; i2 < n; ++i2) {
                y[2] = kappa * nodes[i2];
                if (r01 + y[2] * y[2] >= kappa * kappa) continue;
                for (int i3 = 0; i3 < n; ++i3) {
                    y[3] = kappa * nodes[i3];
                    const double w = phi.value(y);
                    if (w == 0.0) continue;
                    const std::array<double, 4> arg = {x[0] - y[0], x[1] - y[1],
                                                       x[2] - y[2], x[3] - y[3]};
                    const double fv = f(arg);
                    if (!std::isfinite(fv))
                        throw PreconditionError(
                            "convolve4: non-finite sample at node (" + std::to_string(i0) + "," +
                            std::to_string(i1) + "," + std::to_string(i2) + "," +
                            std::to_string(i3) + ")");
                    total += weights[i0] * weights[i1] * weights[i2] * weights[i3] * w * fv;
                }
            }
        }
    }
    const double k4 = kappa * kappa * kappa * kappa;
    return total * k4;
}

}  // namespace pellab::numerics
