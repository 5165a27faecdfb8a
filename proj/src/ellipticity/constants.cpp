#include "pellab/ellipticity/constants.hpp"

#include <cmath>

namespace pellab::ellipticity {

using numerics::RealSymmetricMatrix;

namespace {

// Building blocks of the real embedding. With A = R + iS and xi = x + iy,
//   Re<A xi, xi>        = x'Rx + y'Ry + x'(S' - S)y
//   Re<A xi, conj(xi)>  = x'Rx - y'Ry - x'(S + S')y
// so both are quadratic forms of (x, y) with symmetric 2d x 2d matrices.
RealSymmetricMatrix hermitian_part_embedding(const ComplexMatrix& A) {
    const int d = A.dim();
    RealSymmetricMatrix M(2 * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double r_sym = 0.5 * (A(i, j).real() + A(j, i).real());
            const double s_anti = 0.5 * (A(j, i).imag() - A(i, j).imag());
            M.set(i, j, r_sym);
            M.set(d + i, d + j, r_sym);
            // x_i (S' - S)_{ij} y_j contributes s_anti to the (i, d+j) slot.
            M.data()[static_cast<std::size_t>(i) * 2 * d + (d + j)] += s_anti;
            M.data()[static_cast<std::size_t>(d + j) * 2 * d + i] += s_anti;
        }
    return M;
}

RealSymmetricMatrix conjugate_part_embedding(const ComplexMatrix& A) {
    const int d = A.dim();
    RealSymmetricMatrix M(2 * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            const double r_sym = 0.5 * (A(i, j).real() + A(j, i).real());
            const double s_sym = 0.5 * (A(i, j).imag() + A(j, i).imag());
            M.set(i, j, r_sym);
            M.set(d + i, d + j, -r_sym);
            M.data()[static_cast<std::size_t>(i) * 2 * d + (d + j)] += -s_sym;
            M.data()[static_cast<std::size_t>(d + j) * 2 * d + i] += -s_sym;
        }
    return M;
}

}  // namespace

double lambda_of(const ComplexMatrix& A) {
    return numerics::sym_eig_min(hermitian_part_embedding(A)).first;
}

double lambda_of(const MatrixField& F) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < F.n_cells(); ++c) {
        best = std::min(best, lambda_of(F.at(c)));
        if (F.is_constant()) break;
    }
    return best;
}

double Lambda_of(const ComplexMatrix& A) {
    const double top = numerics::sym_eig_max_value(hermitian_part_embedding(A.adjoint_times_self()));
    return std::sqrt(std::max(top, 0.0));
}

double Lambda_of(const MatrixField& F) {
    double best = 0.0;
    for (std::size_t c = 0; c < F.n_cells(); ++c) {
        best = std::max(best, Lambda_of(F.at(c)));
        if (F.is_constant()) break;
    }
    return best;
}

RealSymmetricMatrix real_form_embedding(const ComplexMatrix& A, double mu) {
    if (!(mu >= 0.0)) throw ParameterError("real_form_embedding: mu must be >= 0");
    RealSymmetricMatrix M = hermitian_part_embedding(A);
    if (mu != 0.0) {
        const RealSymmetricMatrix C = conjugate_part_embedding(A);
        for (std::size_t k = 0; k < M.data().size(); ++k) M.data()[k] += mu * C.data()[k];
    }
    return M;
}

double delta_p(const ComplexMatrix& A, ExponentOrMu pm) {
    return numerics::sym_eig_min(real_form_embedding(A, pm.mu)).first;
}

double delta_p(const ComplexMatrix& A, double p) {
    return delta_p(A, ExponentOrMu::from_p(p));
}

double delta_p_field(const MatrixField& F, double p) {
    return delta_p_field(F, ExponentOrMu::from_p(p));
}

double delta_p_field(const MatrixField& F, ExponentOrMu pm) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < F.n_cells(); ++c) {
        best = std::min(best, delta_p(F.at(c), pm));
        if (F.is_constant()) break;
    }
    return best;
}

PairConstants pair_constants(const ComplexMatrix& A, const ComplexMatrix& B, double p) {
    if (A.dim() != B.dim()) throw StructuralError("pair_constants: dimension mismatch");
    return {std::min(delta_p(A, p), delta_p(B, p)), std::min(lambda_of(A), lambda_of(B)),
            std::max(Lambda_of(A), Lambda_of(B))};
}

PairConstants pair_constants(const MatrixField& A, const MatrixField& B, double p) {
    if (A.dim() != B.dim()) throw StructuralError("pair_constants: dimension mismatch");
    return {std::min(delta_p_field(A, p), delta_p_field(B, p)),
            std::min(lambda_of(A), lambda_of(B)), std::max(Lambda_of(A), Lambda_of(B))};
}

std::pair<double, double> p_range(const ComplexMatrix& A) {
    if (!(lambda_of(A) > 0.0))
        throw PreconditionError("p_range: matrix is not accretive (lambda <= 0)");

    const auto value = [&](double mu) { return delta_p(A, ExponentOrMu::from_mu(mu)); };

    // mu -> min-eig(M0 + mu*M1) is concave (pointwise minimum of affine
    // functions of mu), positive at mu = 0, so it has at most one downward
    // crossing on [0, 1]; bisection is valid. Refined well below the 1e-9
    // contract so the infinity marker at mu* >= 1 - 1e-12 is reachable.
    double mu_star;
    if (value(1.0) > 0.0) {
        mu_star = 1.0;
    } else {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            (value(mid) > 0.0 ? lo : hi) = mid;
        }
        mu_star = hi;
    }

    if (mu_star >= 1.0 - 1e-12) return {1.0, kInfiniteExponent};
    const double p_max = 2.0 / (1.0 - mu_star);
    const double p_min = 2.0 / (1.0 + mu_star);
    return {p_min, p_max};
}

double rotation_angle(const ComplexMatrix& A, double p) {
    const double base = delta_p(A, p);
    if (!(base > 0.0))
        throw PreconditionError("rotation_angle: Delta_p(A) = " + fmt17(base) +
                                " is not positive");

    const auto both_sides = [&](double eps) {
        const double plus = delta_p(ComplexMatrix::rotation(A, eps), p);
        const double minus = delta_p(ComplexMatrix::rotation(A, -eps), p);
        return std::min(plus, minus);
    };

    const double half_pi = 1.5707963267948966;
    if (both_sides(half_pi) > 0.0) return half_pi;
    double lo = 0.0, hi = half_pi;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (both_sides(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double sector_angle(const ComplexMatrix& A) {
    const double lam = lambda_of(A);
    if (!(lam > 0.0)) throw PreconditionError("sector_angle: matrix is not accretive");
    return std::atan2(Lambda_of(A), lam);
}

double sector_angle(const MatrixField& F) {
    const double lam = lambda_of(F);
    if (!(lam > 0.0)) throw PreconditionError("sector_angle: field is not accretive");
    return std::atan2(Lambda_of(F), lam);
}

EllipticityReport make_report(const ComplexMatrix& A, double p) {
    EllipticityReport rep;
    rep.lambda = lambda_of(A);
    rep.Lambda = Lambda_of(A);
    rep.mu = std::abs(1.0 - 2.0 / p);
    rep.delta_p = delta_p(A, p);
    if (rep.lambda > 0.0) {
        rep.omega0 = std::atan2(rep.Lambda, rep.lambda);
        rep.omega0_literal = std::atan2(rep.lambda, rep.Lambda);
        const auto [pmin, pmax] = p_range(A);
        rep.p_min = pmin;
        rep.p_max = pmax;
    } else {
        rep.omega0 = rep.omega0_literal = std::numeric_limits<double>::quiet_NaN();
        rep.p_min = rep.p_max = std::numeric_limits<double>::quiet_NaN();
    }
    rep.theta = rep.delta_p > 0.0 ? rotation_angle(A, p)
                                  : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace pellab::ellipticity
