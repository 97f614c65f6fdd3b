#include <doctest.h>

#include <random>

#include "qsu22/verify.hpp"

using namespace qsu22;

namespace {

const ModelParams kParams{Cplx(1.07, 0.04), 0.8, Cplx(1.1, -0.05), Cplx(0.95, 0.1)};

}  // namespace

TEST_CASE("invariance of the assembled S-matrix") {
    std::mt19937_64 rng(71);
    const Kinematics k1 = random_kinematics(rng, kParams, 1);
    const Kinematics k2 = random_kinematics(rng, kParams, 1);
    const OperatorMatrix S = assemble_S(k1, k2);
    const VerificationReport r = check_invariance(S, k1, k2, 1e-9);
    CHECK(r.passed);
    CHECK(r.residual_max < 1e-12);
    // negative control: the identity is not an intertwiner at distinct momenta
    OperatorMatrix id = S;
    id.entries.setIdentity();
    const VerificationReport bad = check_invariance(id, k1, k2, 1e-9);
    CHECK(!bad.passed);
    CHECK(bad.residual_max > 1e-3);
}

TEST_CASE("factorized scattering identity in the first subspace") {
    std::mt19937_64 rng(72);
    std::uniform_real_distribution<double> re(0.5, 2.0), im(-1.0, 1.0);
    const Cplx q(1.06, 0.05);
    for (const auto& [m1, m2, m3] :
         std::vector<std::array<int, 3>>{{1, 1, 1}, {2, 1, 1}, {2, 2, 2}, {3, 2, 2}}) {
        const VerificationReport r =
            check_ybe_subspaceI(m1, m2, m3, Cplx(re(rng), im(rng)), Cplx(re(rng), im(rng)),
                                Cplx(re(rng), im(rng)), q, m1 + m2 + m3 > 5 ? 1e-8 : 1e-9);
        INFO(r.point);
        CHECK(r.passed);
    }
}

TEST_CASE("factorized scattering on the full triple space") {
    std::mt19937_64 rng(73);
    const Kinematics k1 = random_kinematics(rng, kParams, 1);
    const Kinematics k2 = random_kinematics(rng, kParams, 1);
    const Kinematics k3 = random_kinematics(rng, kParams, 1);
    const VerificationReport r = check_ybe_full(k1, k2, k3, 1e-9);
    CHECK(r.passed);
    CHECK(r.residual_max < 1e-12);
    // corrupting one factor must break the identity
    const VerificationReport bad = check_ybe_full(k1, k2, k3, 1e-9, true);
    CHECK(!bad.passed);
    CHECK(bad.residual_max > 1e-3);
}

TEST_CASE("both factorized-scattering routes agree in the first subspace") {
    // the triple-space check restricted to the first subspace carries the
    // same content as the index-grid identity: both residuals vanish at the
    // same points
    std::mt19937_64 rng(74);
    const Kinematics k1 = random_kinematics(rng, kParams, 2);
    const Kinematics k2 = random_kinematics(rng, kParams, 1);
    const Kinematics k3 = random_kinematics(rng, kParams, 1);
    const VerificationReport full = check_ybe_full(k1, k2, k3, 1e-8);
    const VerificationReport sub = check_ybe_subspaceI(2, 1, 1, k1.z, k2.z, k3.z,
                                                       kParams.q, 1e-9);
    CHECK(full.passed);
    CHECK(sub.passed);
}

TEST_CASE("undeformed limit converges at first order") {
    const RationalPoint pt = rational_point(Cplx(1.9, 0.8), Cplx(1.2, -1.1), 0.9, 2, 2);
    const VerificationReport r = check_rational_limit(2, 2, 1, 0, 1, pt, 1e-4);
    INFO(r.point);
    CHECK(r.passed);
    // full (3,2) grid
    const RationalPoint pt32 = rational_point(Cplx(1.9, 0.8), Cplx(1.2, -1.1), 0.9, 3, 2);
    for (int k1 = 0; k1 < 3; ++k1)
        for (int k2 = 0; k2 < 2; ++k2)
            for (int n = 0; n <= k1 + k2; ++n) {
                if (n > 2) continue;
                const VerificationReport g = check_rational_limit(3, 2, k1, k2, n, pt32, 1e-4);
                INFO(g.point);
                CHECK(g.passed);
            }
}

TEST_CASE("extended evaluation context changes nothing at desk scale") {
    const RationalPoint pt = rational_point(Cplx(1.9, 0.8), Cplx(1.2, -1.1), 0.9, 2, 2);
    eval_context().precision = Precision::Extended;
    const VerificationReport r = check_rational_limit(2, 2, 1, 0, 1, pt, 1e-4);
    eval_context().precision = Precision::Double;
    CHECK(r.passed);
}

TEST_CASE("undeformed-constraint helper") {
    const RationalPoint pt = rational_point(Cplx(1.7, 0.4), Cplx(2.1, -0.3), 1.1, 3, 2);
    CHECK(std::abs(pt.x1p + 1.0 / pt.x1p - pt.x1m - 1.0 / pt.x1m - Cplx(0, 3.0 / 1.1)) < 1e-12);
    CHECK(std::abs(pt.x2p + 1.0 / pt.x2p - pt.x2m - 1.0 / pt.x2m - Cplx(0, 2.0 / 1.1)) < 1e-12);
}

TEST_CASE("strong-coupling data invariants") {
    const ClassicalLimitPoint p = classical_limit_point(0.3, 1e3, Cplx(1.9, 0.8), 2);
    CHECK(std::abs(p.h_tilde - Cplx(0, -0.3) / std::sqrt(Cplx(1 - 0.09))) < 1e-15);
    // the evaluation parameter equals -(C + D)/(C - D)
    CHECK(std::abs(p.z_cl + (p.C_cl + p.D_cl_charge) / (p.C_cl - p.D_cl_charge)) < 1e-12);
}

TEST_CASE("strong-coupling limits of the coefficients") {
    for (const auto& [m1, m2, k1, k2] :
         std::vector<std::array<int, 4>>{{2, 2, 0, 1}, {3, 2, 1, 1}, {4, 3, 2, 2}}) {
        const auto p1 = classical_limit_point(0.3, 1e3, Cplx(1.9, 0.8), m1);
        const auto p2 = classical_limit_point(0.3, 1e3, Cplx(1.2, -1.1), m2);
        const VerificationReport r = check_classical_limit(m1, m2, k1, k2, p1, p2, 1e4);
        INFO(r.point);
        CHECK(r.passed);
    }
}

TEST_CASE("inter-block relations of the fundamental special case") {
    std::mt19937_64 rng(75);
    for (int Q : {1, 2, 3}) {
        const Kinematics k1 = random_kinematics(rng, kParams, Q);
        const Kinematics k2 = random_kinematics(rng, kParams, 1);
        const VerificationReport r =
            check_sq1_relations(k1, k2, Q <= 2 ? 1e-9 : 1e-8);
        INFO(r.point);
        CHECK(r.passed);
    }
}

TEST_CASE("report passes exactly at the tolerance boundary") {
    const VerificationReport a = VerificationReport::make("x", "p", 0.5, 0.5, 0.5);
    CHECK(a.passed);
    const VerificationReport b = VerificationReport::make("x", "p", 0.6, 0.6, 0.5);
    CHECK(!b.passed);
}
