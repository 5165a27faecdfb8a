#pragma once

#include <optional>

#include "pellab/ellipticity/complex_matrix.hpp"
#include "pellab/numerics/sym_eig.hpp"

namespace pellab::ellipticity {

constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

// mu = |1 - 2/p|; also accepted raw (mu >= 0, possibly > 1) so that
// quantities like Delta_{2-q} stay computable.
struct ExponentOrMu {
    double mu;
    static ExponentOrMu from_p(double p) {
        if (p == 0.0) throw ParameterError("exponent p must be nonzero");
        return {std::abs(1.0 - 2.0 / p)};
    }
    static ExponentOrMu from_mu(double mu) {
        if (!(mu >= 0.0)) throw ParameterError("mu must be >= 0");
        return {mu};
    }
};

// Smallest real part of <A xi, xi> over unit xi: the ellipticity constant.
// May be <= 0; failure of accretivity is reportable.
double lambda_of(const ComplexMatrix& A);
double lambda_of(const MatrixField& F);

// Operator norm (largest singular value): the boundedness constant.
double Lambda_of(const ComplexMatrix& A);
double Lambda_of(const MatrixField& F);

// Real symmetric 2d x 2d matrix M with <M V(xi), V(xi)> = Re<A xi, xi + mu conj(xi)>.
numerics::RealSymmetricMatrix real_form_embedding(const ComplexMatrix& A, double mu);

// Delta_p(A): smallest eigenvalue of the real form embedding.
double delta_p(const ComplexMatrix& A, ExponentOrMu pm);
double delta_p(const ComplexMatrix& A, double p);
double delta_p_field(const MatrixField& F, double p);
double delta_p_field(const MatrixField& F, ExponentOrMu pm);

// Pair constants: min / min / max of the single-matrix quantities.
struct PairConstants {
    double delta;
    double lambda;
    double Lambda;
};
PairConstants pair_constants(const ComplexMatrix& A, const ComplexMatrix& B, double p);
PairConstants pair_constants(const MatrixField& A, const MatrixField& B, double p);

// Maximal interval around 2 on which Delta_p(A) > 0; second component is
// +infinity when A stays p-elliptic for every finite p.
std::pair<double, double> p_range(const ComplexMatrix& A);

// Largest rotation angle theta with Delta_p(e^{+-i theta} A) > 0, found by
// bisection on [0, pi/2] at tolerance 1e-6.
double rotation_angle(const ComplexMatrix& A, double p);

// Numerical-range angle bound arctan(Lambda/lambda). The literal variant
// arctan(lambda/Lambda) is recorded separately in reports.
double sector_angle(const ComplexMatrix& A);
double sector_angle(const MatrixField& F);

struct EllipticityReport {
    double lambda = 0.0;
    double Lambda = 0.0;
    double delta_p = 0.0;
    double mu = 0.0;
    double omega0 = 0.0;        // arctan(Lambda/lambda), used for resolvent regions
    double omega0_literal = 0.0; // arctan(lambda/Lambda), recorded for traceability
    double p_min = 0.0;
    double p_max = 0.0;          // kInfiniteExponent when unbounded
    double theta = 0.0;          // rotation angle at the requested p (NaN if Delta_p <= 0)
};

EllipticityReport make_report(const ComplexMatrix& A, double p);

}  // namespace pellab::ellipticity
