#include "pellab/numerics/sym_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pellab::numerics {

RealSymmetricMatrix::RealSymmetricMatrix(int dim) : dim_(dim) {
    if (dim < 1) throw StructuralError("RealSymmetricMatrix: dim must be >= 1");
    a_.assign(static_cast<std::size_t>(dim) * dim, 0.0);
}

void RealSymmetricMatrix::check() const {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < i; ++j)
            if (a_[idx(i, j)] != a_[idx(j, i)])
                throw StructuralError("RealSymmetricMatrix: asymmetric storage");
}

namespace {

double off_diagonal_norm(const std::vector<double>& a, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += sqr(a[static_cast<std::size_t>(i) * n + j]);
    return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition sym_eig(const RealSymmetricMatrix& S) {
    S.check();
    const int n = S.dim();
    std::vector<double> a = S.data();
    std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto at = [&](std::vector<double>& m, int i, int j) -> double& {
        return m[static_cast<std::size_t>(i) * n + j];
    };

    double scale = 0.0;
    for (double x : a) scale = std::max(scale, std::abs(x));
    const double stop = std::max(1e-15 * scale * n, 1e-300);

    for (int sweep = 0; sweep < 64 && off_diagonal_norm(a, n) > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double app = at(a, p, p);
                const double aqq = at(a, q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                // Stable tangent of the rotation angle.
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = at(a, k, p);
                    const double akq = at(a, k, q);
                    at(a, k, p) = c * akp - s * akq;
                    at(a, k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(a, p, k);
                    const double aqk = at(a, q, k);
                    at(a, p, k) = c * apk - s * aqk;
                    at(a, q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = at(v, k, p);
                    const double vkq = at(v, k, q);
                    at(v, k, p) = c * vkp - s * vkq;
                    at(v, k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return at(a, i, i) < at(a, j, j);
    });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.assign(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k) {
        out.values[k] = at(a, order[k], order[k]);
        for (int i = 0; i < n; ++i) out.vectors[k][i] = at(v, i, order[k]);
    }
    return out;
}

std::pair<double, std::vector<double>> sym_eig_min(const RealSymmetricMatrix& S) {
    const auto dec = sym_eig(S);
    const int n = S.dim();
    const double lambda = dec.values.front();
    const auto& vec = dec.vectors.front();

    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = -lambda * vec[i];
        for (int j = 0; j < n; ++j) r += S(i, j) * vec[j];
        resid += r * r;
    }
    resid = std::sqrt(resid);
    if (resid > 1e-10 * (1.0 + std::abs(lambda)) * n)
        throw SolverError("sym_eig_min: Jacobi iteration did not converge", resid);
    return {lambda, vec};
}

double sym_eig_max_value(const RealSymmetricMatrix& S) { return sym_eig(S).values.back(); }

}  // namespace pellab::numerics
