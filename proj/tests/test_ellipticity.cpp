#include <doctest.h>

#include <cmath>

#include "pellab/ellipticity/constants.hpp"
#include "pellab/rng.hpp"

using namespace pellab;
using namespace pellab::ellipticity;

namespace {

ComplexMatrix upper_i() {
    ComplexMatrix A(2);  // [[1, i], [0, 1]]
    A(0, 0) = 1.0;
    A(0, 1) = cxd(0, 1);
    A(1, 1) = 1.0;
    return A;
}

ComplexMatrix random_matrix(Rng& rng, int d) {
    ComplexMatrix A(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = rng.complex_normal();
    return A;
}

// Shifted to lambda(A) >= margin.
ComplexMatrix random_accretive(Rng& rng, int d, double margin = 0.1) {
    ComplexMatrix A = random_matrix(rng, d);
    const double lam = lambda_of(A);
    if (lam < margin)
        for (int i = 0; i < d; ++i) A(i, i) += (margin - lam);
    return A;
}

double form_direct(const ComplexMatrix& A, const cvec& xi, double mu) {
    const cvec Axi = A.apply(xi);
    cxd plain(0, 0), conj_part(0, 0);
    for (std::size_t j = 0; j < xi.size(); ++j) {
        plain += Axi[j] * std::conj(xi[j]);
        conj_part += Axi[j] * xi[j];  // <A xi, conj(xi)> has no conjugation
    }
    return plain.real() + mu * conj_part.real();
}

}  // namespace

TEST_CASE("lambda_of: identity, diagonal, and the hand-computed Hermitian part") {
    CHECK(lambda_of(ComplexMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-13));
    ComplexMatrix D(2);
    D(0, 0) = 1.0;
    D(1, 1) = 2.0;
    CHECK(lambda_of(D) == doctest::Approx(1.0).epsilon(1e-13));
    // Hermitian part of [[1,i],[0,1]] is [[1, i/2],[-i/2, 1]], eigenvalues 1 +- 1/2
    CHECK(lambda_of(upper_i()) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Lambda_of: identity, diagonal, singular value oracle") {
    CHECK(Lambda_of(ComplexMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-13));
    ComplexMatrix D(2);
    D(0, 0) = 1.0;
    D(1, 1) = 2.0;
    CHECK(Lambda_of(D) == doctest::Approx(2.0).epsilon(1e-13));
    // A*A = [[1, i],[-i, 2]] has eigenvalues (3 +- sqrt(5))/2
    const double expect = std::sqrt((3.0 + std::sqrt(5.0)) / 2.0);
    CHECK(Lambda_of(upper_i()) == doctest::Approx(expect).epsilon(1e-12));

    // operator-norm property: |<A xi, eta>| <= Lambda for random unit pairs
    Rng rng(5);
    const ComplexMatrix A = random_matrix(rng, 3);
    const double Lam = Lambda_of(A);
    for (int k = 0; k < 200; ++k) {
        const cvec xi = rng.unit_vector(3);
        const cvec Axi = A.apply(xi);
        double n2 = 0.0;
        for (cxd z : Axi) n2 += abs2(z);
        CHECK(std::sqrt(n2) <= Lam * (1 + 1e-10));
    }
}

TEST_CASE("real_form_embedding: identity cases") {
    const auto M0 = real_form_embedding(ComplexMatrix::identity(2), 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(M0(i, j) == (i == j ? 1.0 : 0.0));

    // d=1, mu=1: Re<xi, xi + conj(xi)> = x^2 + y^2 + (x^2 - y^2) = 2 x^2
    const auto M1 = real_form_embedding(ComplexMatrix::identity(1), 1.0);
    CHECK(M1(0, 0) == doctest::Approx(2.0));
    CHECK(M1(1, 1) == doctest::Approx(0.0));
    CHECK(M1(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("real_form_embedding: matches direct sesquilinear evaluation") {
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform() * 4);
        const ComplexMatrix A = random_matrix(rng, d);
        const double mu = rng.uniform(0.0, 2.0);
        const auto M = real_form_embedding(A, mu);
        for (int k = 0; k < 100; ++k) {
            const cvec xi = rng.unit_vector(d);
            const rvec v = identify_V(xi);
            double quad = 0.0;
            for (int i = 0; i < 2 * d; ++i)
                for (int j = 0; j < 2 * d; ++j) quad += M(i, j) * v[i] * v[j];
            CHECK(std::abs(quad - form_direct(A, xi, mu)) < 1e-12);
        }
    }
}

TEST_CASE("delta_p: identity and rotated scalars") {
    CHECK(delta_p(ComplexMatrix::identity(2), 2.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(delta_p(ComplexMatrix::identity(2), 4.0) == doctest::Approx(0.5).epsilon(1e-13));

    // brute-force sphere consistency (from above) for the p=4 identity case
    Rng rng(7);
    double sampled = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 100000; ++k) {
        const cvec xi = rng.unit_vector(2);
        sampled = std::min(sampled, form_direct(ComplexMatrix::identity(2), xi, 0.5));
    }
    CHECK(0.5 <= sampled + 1e-12);
    CHECK(sampled - 0.5 < 1e-3);

    const auto rot = ComplexMatrix::scalar(cxd(std::cos(M_PI / 3), std::sin(M_PI / 3)));
    CHECK(std::abs(delta_p(rot, 4.0)) < 1e-10);  // cos(pi/3) - |1 - 2/4| = 0
}

TEST_CASE("delta_p: raw mu values beyond 1 are accepted") {
    // identity: Delta at raw mu is 1 - mu
    CHECK(delta_p(ComplexMatrix::identity(2), ExponentOrMu::from_mu(2.0)) ==
          doctest::Approx(-1.0).epsilon(1e-13));
    CHECK_THROWS_AS(ExponentOrMu::from_mu(-0.5), ParameterError);
    CHECK_THROWS_AS(ExponentOrMu::from_p(0.0), ParameterError);
}

TEST_CASE("delta_p: conjugate symmetry") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + trial % 3;
        const ComplexMatrix A = random_matrix(rng, d);
        for (double p : {2.5, 4.0, 17.0}) {
            const double q = p / (p - 1.0);
            CHECK(std::abs(delta_p(A, p) - delta_p(A, q)) <= 1e-12);
        }
    }
}

TEST_CASE("delta_p: non-increasing in p on [2, 32]") {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const ComplexMatrix A = random_accretive(rng, 1 + trial % 3);
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 20; ++k) {
            const double p = 2.0 * std::pow(16.0, k / 19.0);
            const double val = delta_p(A, p);
            CHECK(val <= prev + 1e-12);
            prev = val;
        }
    }
}

TEST_CASE("delta_p: Delta_2 equals lambda, and delta_p <= lambda") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix A = random_matrix(rng, 1 + trial % 4);
        CHECK(std::abs(delta_p(A, 2.0) - lambda_of(A)) <= 1e-12);
        const double p = rng.uniform(2.0, 40.0);
        CHECK(delta_p(A, p) <= lambda_of(A) + 1e-12);
    }
}

TEST_CASE("delta_p: real accretive matrices are p-elliptic for every tested p") {
    Rng rng(24);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + trial % 3;
        ComplexMatrix A(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) A(i, j) = rng.normal();
        const double lam = lambda_of(A);
        if (lam <= 0.0) continue;
        for (double p : {2.0, 5.0, 50.0, 1000.0}) CHECK(delta_p(A, p) > 0.0);
    }
}

TEST_CASE("delta_p_field and pair_constants") {
    const auto I2 = ComplexMatrix::identity(2);
    MatrixField constant(I2, 9);
    CHECK(delta_p_field(constant, 4.0) == doctest::Approx(0.5).epsilon(1e-13));

    ComplexMatrix two(2);
    two(0, 0) = two(1, 1) = 2.0;
    MatrixField mixed(I2, 2);
    mixed.set_cell(1, two);
    CHECK(delta_p_field(mixed, 2.0) == doctest::Approx(1.0).epsilon(1e-13));

    // a single non-accretive cell drags the field constant negative
    MatrixField spoiled(I2, 4);
    ComplexMatrix bad(2);
    bad(0, 0) = cxd(-1.0, 0.0);
    bad(1, 1) = 1.0;
    spoiled.set_cell(2, bad);
    CHECK(delta_p_field(spoiled, 2.0) < 0.0);

    ComplexMatrix three(2);
    three(0, 0) = three(1, 1) = 3.0;
    const auto pc = pair_constants(I2, three, 2.0);
    CHECK(pc.delta == doctest::Approx(1.0));
    CHECK(pc.lambda == doctest::Approx(1.0));
    CHECK(pc.Lambda == doctest::Approx(3.0));

    Rng rng(25);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix A = random_matrix(rng, 2);
        const ComplexMatrix B = random_matrix(rng, 2);
        const auto pr = pair_constants(A, B, 3.0);
        CHECK(pr.delta == doctest::Approx(std::min(delta_p(A, 3.0), delta_p(B, 3.0))));
        CHECK(pr.lambda == doctest::Approx(std::min(lambda_of(A), lambda_of(B))));
        CHECK(pr.Lambda == doctest::Approx(std::max(Lambda_of(A), Lambda_of(B))));
    }
    CHECK_THROWS_AS(pair_constants(ComplexMatrix::identity(2), ComplexMatrix::identity(3), 2.0),
                    StructuralError);
}

TEST_CASE("p_range: identity, real elliptic, rotated scalar") {
    const auto [lo, hi] = p_range(ComplexMatrix::identity(2));
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::isinf(hi));
    for (double p : {10.0, 100.0}) CHECK(delta_p(ComplexMatrix::identity(2), p) > 0.0);

    Rng rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        ComplexMatrix A(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) A(i, j) = rng.normal();
        if (lambda_of(A) <= 0.0) continue;
        const auto [plo, phi] = p_range(A);
        CHECK(plo == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::isinf(phi));
    }

    const auto rot = ComplexMatrix::scalar(cxd(std::cos(M_PI / 3), std::sin(M_PI / 3)));
    const auto [rlo, rhi] = p_range(rot);
    CHECK(rhi == doctest::Approx(4.0).epsilon(1e-7));
    CHECK(rlo == doctest::Approx(4.0 / 3.0).epsilon(1e-7));
    CHECK(std::abs(1.0 / rlo + 1.0 / rhi - 1.0) < 1e-9);

    ComplexMatrix neg(1);
    neg(0, 0) = cxd(-1.0, 0.0);
    CHECK_THROWS_AS(p_range(neg), PreconditionError);
}

TEST_CASE("rotation_angle: identity and rotated scalars") {
    const double t2 = rotation_angle(ComplexMatrix::identity(1), 2.0);
    CHECK(std::abs(t2 - M_PI / 2) <= 2e-6);

    const double t4 = rotation_angle(ComplexMatrix::identity(1), 4.0);
    CHECK(std::abs(t4 - M_PI / 3) <= 1e-5);

    const auto rot = ComplexMatrix::scalar(cxd(std::cos(M_PI / 6), std::sin(M_PI / 6)));
    const double tr = rotation_angle(rot, 2.0);
    CHECK(std::abs(tr - (M_PI / 2 - M_PI / 6)) <= 1e-5);

    // rotated by the found angle, Delta_p stays nonnegative just inside
    const double inside = t4 - 1e-4;
    CHECK(delta_p(ComplexMatrix::rotation(ComplexMatrix::identity(1), inside), 4.0) > 0.0);

    ComplexMatrix neg(1);
    neg(0, 0) = cxd(-1.0, 0.0);
    CHECK_THROWS_AS(rotation_angle(neg, 2.0), PreconditionError);
}

TEST_CASE("sector_angle: identity, diagonal, scalar") {
    CHECK(sector_angle(ComplexMatrix::identity(2)) == doctest::Approx(M_PI / 4).epsilon(1e-12));
    ComplexMatrix D(2);
    D(0, 0) = 1.0;
    D(1, 1) = 2.0;
    CHECK(sector_angle(D) == doctest::Approx(std::atan(2.0)).epsilon(1e-12));
    CHECK(sector_angle(ComplexMatrix::scalar(cxd(1, 0))) ==
          doctest::Approx(M_PI / 4).epsilon(1e-12));
}

TEST_CASE("apply_Ip: fixed points and arithmetic") {
    const cvec xi = {cxd(0.3, -1.2), cxd(2.0, 0.5)};
    const cvec same = apply_Ip(xi, 2.0);
    for (int i = 0; i < 2; ++i) CHECK(same[i] == xi[i]);

    const cvec one = apply_Ip(cvec{cxd(0, 1)}, 4.0);
    CHECK(std::abs(one[0] - cxd(0, 0.5)) < 1e-15);

    const cvec real_in = {cxd(1.5, 0.0)};
    const cvec scaled = apply_Ip(real_in, 3.0);
    CHECK(std::abs(scaled[0] - cxd(1.5 * (2.0 - 2.0 / 3.0), 0.0)) < 1e-15);
}

TEST_CASE("identification operators: V, W, inverses, inner-product identity") {
    const rvec v = identify_V({cxd(1, 2)});
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 2.0);

    Rng rng(33);
    for (int k = 0; k < 100; ++k) {
        const int d = 1 + k % 4;
        const cvec z = rng.unit_vector(d);
        const cvec w = rng.unit_vector(d);
        cxd zw(0, 0);
        for (int j = 0; j < d; ++j) zw += z[j] * std::conj(w[j]);
        const rvec vz = identify_V(z), vw = identify_V(w);
        double dot = 0.0;
        for (std::size_t j = 0; j < vz.size(); ++j) dot += vz[j] * vw[j];
        CHECK(std::abs(zw.real() - dot) <= 1e-15);

        const cvec back = identify_V_inverse(vz);
        for (int j = 0; j < d; ++j) CHECK(back[j] == z[j]);

        const rvec big = identify_W(z, w);
        const auto [b1, b2] = identify_W_inverse(big);
        for (int j = 0; j < d; ++j) {
            CHECK(b1[j] == z[j]);
            CHECK(b2[j] == w[j]);
        }
    }
}

TEST_CASE("make_report: invariants hold on random accretive matrices") {
    Rng rng(44);
    for (int trial = 0; trial < 25; ++trial) {
        const ComplexMatrix A = random_accretive(rng, 1 + trial % 3);
        const double p = rng.uniform(2.0, 6.0);
        const auto rep = make_report(A, p);
        CHECK(rep.lambda <= rep.Lambda + 1e-12);
        CHECK(rep.delta_p <= rep.lambda + rep.mu * rep.Lambda + 1e-10);
        if (!std::isinf(rep.p_max))
            CHECK(std::abs(1.0 / rep.p_min + 1.0 / rep.p_max - 1.0) < 1e-9);
        CHECK(rep.omega0 == doctest::Approx(std::atan2(rep.Lambda, rep.lambda)));
        CHECK(rep.omega0_literal == doctest::Approx(std::atan2(rep.lambda, rep.Lambda)));
    }
}
