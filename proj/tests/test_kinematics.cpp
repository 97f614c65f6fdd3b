#include <doctest.h>

#include <random>

#include "qsu22/kinematics.hpp"

using namespace qsu22;

namespace {

Kinematics make_point(Cplx q, double g, int M, Cplx xp, Cplx gamma = Cplx(1, 0),
                      Cplx alpha = Cplx(1, 0), Cplx alpha_t = Cplx(1, 0)) {
    ModelParams p{q, g, alpha, alpha_t};
    const auto roots = solve_mass_shell(xp, p, M);
    return build_kinematics(xp, roots[0], gamma, p, M);
}

}  // namespace

TEST_CASE("xi_of") {
    // xi carries the factor (q - 1/q)
    const auto near1 = xi_of({Cplx(1.0 + 1e-10, 0.0), 1.5});
    CHECK(std::abs(near1.xi) < 1e-8);

    const ModelParams p{Cplx(1.12, 0.07), 1.7};
    const auto [xi, gt] = xi_of(p);
    // the closed identity for xi - 1/xi
    const Cplx lhs = xi - 1.0 / xi;
    const Cplx rhs = gt / (Cplx(0, 1) * (p.q - 1.0 / p.q) * p.g * p.g);
    CHECK(std::abs(lhs - rhs) < 1e-13);

    // direct recomputation at q = 1.1, g = 2
    const ModelParams p2{Cplx(1.1, 0.0), 2.0};
    const auto r2 = xi_of(p2);
    const Cplx t = p2.q - 1.0 / p2.q;
    const Cplx gt2 = std::sqrt(4.0 / (1.0 - 4.0 * t * t));
    CHECK(std::abs(r2.g_tilde - gt2) < 1e-13);
    CHECK(std::abs(r2.xi - Cplx(0, -1) * gt2 * t) < 1e-13);
}

TEST_CASE("xi_of singular parameters") {
    // g^2 (q - 1/q)^2 = 1 at real q with g = 1/(q - 1/q)
    const double qv = 1.4;
    const double g = 1.0 / (qv - 1.0 / qv);
    CHECK_THROWS_AS(xi_of({Cplx(qv, 0.0), g}), singular_parameters_error);
}

TEST_CASE("zeta_of") {
    const Cplx xi(0.3, -0.4);
    // numerator vanishes when x + 1/x = -xi - 1/xi
    const Cplx s = -xi - 1.0 / xi;
    const Cplx x0 = (s + std::sqrt(s * s - 4.0)) / 2.0;
    CHECK(std::abs(zeta_of(x0, xi)) < 1e-12);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 30; ++t) {
        const Cplx x(u(rng) + 2.0, u(rng));
        CHECK(std::abs(zeta_of(x, xi) - zeta_of(1.0 / x, xi)) < 1e-12);
        const Cplx direct = -(x + 1.0 / x + xi + 1.0 / xi) / (xi - 1.0 / xi);
        CHECK(std::abs(zeta_of(x, xi) - direct) < 1e-13);
    }
    CHECK_THROWS_AS(zeta_of(Cplx(0, 0), xi), std::domain_error);
    CHECK_THROWS_AS(zeta_of(Cplx(1, 1), Cplx(1, 0)), std::domain_error);
}

TEST_CASE("solve_mass_shell roots") {
    const ModelParams p{Cplx(1.05, 0.0), 1.3};
    const int M = 2;
    const Cplx xp(2.0, 1.0);
    const auto roots = solve_mass_shell(xp, p, M);
    CHECK(std::abs(roots[0]) <= std::abs(roots[1]));
    const Cplx xi = xi_of(p).xi;
    const Cplx qM = std::pow(p.q, M);
    for (const Cplx xm : roots) {
        CHECK(std::abs(zeta_of(xp, xi) / qM - zeta_of(xm, xi) * qM) < 1e-10);
    }
    // the quadratic has constant/leading ratio 1: the roots multiply to 1
    CHECK(std::abs(roots[0] * roots[1] - 1.0) < 1e-10);
    // independent quadratic-formula oracle
    const Cplx C0 = (qM - 1.0 / qM) * (xi + 1.0 / xi) - (xp + 1.0 / xp) / qM;
    const Cplx b = C0 / qM;
    const Cplx r1 = (-b + std::sqrt(b * b - 4.0)) / 2.0;
    const Cplx r2 = (-b - std::sqrt(b * b - 4.0)) / 2.0;
    CHECK(std::min(std::abs(roots[0] - r1), std::abs(roots[0] - r2)) < 1e-12);
    CHECK(std::min(std::abs(roots[1] - r1), std::abs(roots[1] - r2)) < 1e-12);
}

TEST_CASE("build_kinematics consistency relations") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> mod(1.3, 2.4), ang(0, 6.28), gm(0.6, 1.4);
    for (int M : {1, 2, 3}) {
        const ModelParams p{Cplx(1.09, 0.05), 0.85, Cplx(1.2, -0.1), Cplx(0.9, 0.2)};
        for (int t = 0; t < 34; ++t) {
            const Kinematics kin =
                make_point(p.q, p.g, M, std::polar(mod(rng), ang(rng)),
                           std::polar(gm(rng), ang(rng)), p.alpha, p.alpha_tilde);
            const Cplx q = p.q;
            // z in terms of the Zhukovsky pair
            const Cplx lhs = kin.z * (q - 1.0 / q) * (kin.xi - 1.0 / kin.xi);
            const Cplx rhs = -(kin.xplus - kin.xminus + 1.0 / kin.xplus - 1.0 / kin.xminus) /
                             qnumber(M, q);
            CHECK(std::abs(lhs - rhs) < 1e-11);
            // z in terms of the labels
            const Cplx zl = p.g / (kin.g_tilde * p.alpha * p.alpha_tilde) *
                            (kin.labels.a * kin.affine_labels.b -
                             kin.labels.b * kin.affine_labels.a);
            CHECK(std::abs(kin.z - zl) < 1e-11);
            const Cplx zi = p.g * p.alpha * p.alpha_tilde / kin.g_tilde *
                            (kin.labels.c * kin.affine_labels.d -
                             kin.labels.d * kin.affine_labels.c);
            CHECK(std::abs(1.0 / kin.z - zi) < 1e-10);
            // the four cross-family label products; the c/d pair carries
            // V_4 = V^{-1} in the last factor
            const Cplx gt = kin.g_tilde;
            const Cplx at = p.alpha_tilde;
            const Cplx qM2 = kin.q_half_M;
            const Cplx U2 = kin.U * kin.U;
            const Cplx qnM = qnumber(M, q);
            CHECK(std::abs(kin.labels.a * kin.affine_labels.d -
                           gt / (at * qnM) * (qM2 * U2 * kin.V - kin.V / qM2)) < 1e-11);
            CHECK(std::abs(kin.labels.b * kin.affine_labels.c -
                           gt / (at * qnM) * (U2 * kin.V / qM2 - qM2 * kin.V)) < 1e-11);
            CHECK(std::abs(kin.labels.c * kin.affine_labels.b -
                           gt * at / qnM * (qM2 / kin.V - 1.0 / (qM2 * U2 * kin.V))) < 1e-11);
            CHECK(std::abs(kin.labels.d * kin.affine_labels.a -
                           gt * at / qnM * (1.0 / (qM2 * kin.V) - qM2 / (U2 * kin.V))) < 1e-11);
            CHECK(check_shortening(kin) < 1e-9);
            CHECK(check_shortening_affine(kin) < 1e-9);
        }
    }
}

TEST_CASE("off-shell perturbation breaks the shortening condition") {
    const ModelParams p{Cplx(1.07, 0.04), 0.8};
    const auto roots = solve_mass_shell(Cplx(1.8, 0.6), p, 2);
    // loose tolerance admits the off-shell point so the residual is visible
    const Kinematics bad = build_kinematics(Cplx(1.8, 0.6), roots[0] + Cplx(1e-3, 0.0),
                                            Cplx(1, 0), p, 2, Tolerance{1e6, 1e6});
    CHECK(check_shortening(bad) > 1e-6);
    // the strict default rejects it outright
    CHECK_THROWS_AS(build_kinematics(Cplx(1.8, 0.6), roots[0] + Cplx(1e-3, 0.0),
                                     Cplx(1, 0), p, 2),
                    std::invalid_argument);
}

TEST_CASE("affine substitution is an involution on the Zhukovsky pair") {
    const Kinematics kin = make_point(Cplx(1.06, 0.03), 0.9, 2, Cplx(1.9, 0.7));
    CHECK(std::abs(1.0 / (1.0 / kin.xplus) - kin.xplus) < 1e-15);
    CHECK(std::abs(1.0 / (1.0 / kin.xminus) - kin.xminus) < 1e-15);
    // plus branch of the affine central elements
    CHECK(std::abs(kin.U_tilde * kin.U - 1.0) < 1e-15);
    CHECK(std::abs(kin.V_tilde * kin.V - 1.0) < 1e-15);
}

TEST_CASE("gamma covariance of the consistency checks") {
    // the consistency relations hold for any gauge choice of gamma
    for (const Cplx gamma : {Cplx(1, 0), Cplx(0.4, -1.2), Cplx(2.5, 0.3)}) {
        const Kinematics kin = make_point(Cplx(1.07, 0.05), 0.75, 3, Cplx(1.6, -0.8), gamma);
        CHECK(check_shortening(kin) < 1e-9);
    }
}

TEST_CASE("random_kinematics is reproducible and generic") {
    const ModelParams p{Cplx(1.07, 0.04), 0.8};
    std::mt19937_64 a(99), b(99);
    for (int M : {1, 2, 3}) {
        const Kinematics k1 = random_kinematics(a, p, M);
        const Kinematics k2 = random_kinematics(b, p, M);
        CHECK(k1.xplus == k2.xplus);
        const Cplx U2 = k1.U * k1.U, V2 = k1.V * k1.V;
        CHECK(std::abs(U2 * V2 - 1.0) > 1e-12);
        CHECK(std::abs(U2 - V2) > 1e-12);
    }
}
