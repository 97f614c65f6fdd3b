#include <doctest.h>

#include <random>

#include "qsu22/oracle.hpp"
#include "qsu22/smatrix.hpp"

using namespace qsu22;

namespace {

const ModelParams kParams{Cplx(1.07, 0.04), 0.8, Cplx(1.0, 0.0), Cplx(1.0, 0.0)};

}  // namespace

TEST_CASE("nullspace reproduces the fundamental S-matrix") {
    std::mt19937_64 rng(61);
    const Kinematics k1 = random_kinematics(rng, kParams, 1);
    const Kinematics k2 = random_kinematics(rng, kParams, 1);
    const OracleResult r = intertwiner_nullspace(k1, k2);
    CHECK(r.sigma2 / r.sigma1 > 1e6);
    const OperatorMatrix F = fundamental_S(k1, k2);
    CHECK((r.S.entries - F.entries).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("one-dimensional kernel beyond the fundamental representation") {
    std::mt19937_64 rng(62);
    const Kinematics k1 = random_kinematics(rng, kParams, 2);
    const Kinematics k2 = random_kinematics(rng, kParams, 1);
    const OracleResult r = intertwiner_nullspace(k1, k2);
    CHECK(r.sigma1 < 1e-8 * r.sigma_max);
    CHECK(r.sigma2 > 1e-8 * r.sigma_max);
    const OperatorMatrix S = assemble_S(k1, k2);
    CHECK((r.S.entries - S.entries).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("result is independent of the stacked generator subset") {
    std::mt19937_64 rng(63);
    const Kinematics k1 = random_kinematics(rng, kParams, 1);
    const Kinematics k2 = random_kinematics(rng, kParams, 1);
    const OracleResult with_cartans = intertwiner_nullspace(k1, k2);
    OracleOptions opts;
    opts.generators = OracleOptions::without_cartans();
    const OracleResult without = intertwiner_nullspace(k1, k2, opts);
    CHECK((with_cartans.S.entries - without.S.entries).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("kernel spectrum is ascending with a large gap") {
    std::mt19937_64 rng(64);
    const Kinematics k1 = random_kinematics(rng, kParams, 1);
    const Kinematics k2 = random_kinematics(rng, kParams, 1);
    const auto sv = kernel_spectrum(k1, k2);
    REQUIRE(sv.size() == 5);
    for (size_t i = 1; i < sv.size(); ++i) CHECK(sv[i] >= sv[i - 1] * 0.999);
    CHECK(sv[1] / sv[0] > 1e6);
}

TEST_CASE("dropping the second fermionic node family degenerates the kernel") {
    // without the second fermionic node the bound-state system is no longer
    // rigid: more than one singular value collapses
    std::mt19937_64 rng(65);
    const Kinematics k1 = random_kinematics(rng, kParams, 2);
    const Kinematics k2 = random_kinematics(rng, kParams, 2);
    OracleOptions opts;
    opts.generators = OracleOptions::non_affine_only();
    CHECK_THROWS_AS(intertwiner_nullspace(k1, k2, opts), degeneracy_error);
    const auto sv = kernel_spectrum(k1, k2, opts);
    CHECK(sv[1] < 1e-8 * sv[4]);  // at least a two-dimensional kernel
}

TEST_CASE("kernel direction stays unique toward the eigenvalue pole") {
    // the vacuum-normalized matrix diverges as x2+ approaches x1-, but the
    // nullspace direction itself remains one-dimensional
    std::mt19937_64 rng(68);
    const Kinematics k1 = random_kinematics(rng, kParams, 1);
    const Cplx xp = k1.xminus * (1.0 + 1e-9);
    const auto roots = solve_mass_shell(xp, kParams, 1);
    const Kinematics k2 = build_kinematics(xp, roots[0], Cplx(1, 0), kParams, 1);
    const auto sv = kernel_spectrum(k1, k2);
    CHECK(sv[1] / sv[0] > 1e6);
    // while the closed-form path refuses the point
    CHECK_THROWS_AS(coeff_D(k1, k2), pole_error);
}

TEST_CASE("oracle preserves the particle-number sectors") {
    std::mt19937_64 rng(66);
    const Kinematics k1 = random_kinematics(rng, kParams, 2);
    const Kinematics k2 = random_kinematics(rng, kParams, 1);
    const OracleResult r = intertwiner_nullspace(k1, k2);
    const auto b1 = enumerate_basis(2);
    const auto b2 = enumerate_basis(1);
    const auto nf = [](const BasisState& a, const BasisState& b) {
        return std::pair<int, int>{a.m + b.m + a.n + b.n + 2 * a.l + 2 * b.l,
                                   a.m + b.m + a.l + b.l};
    };
    for (size_t i1 = 0; i1 < b1.size(); ++i1)
        for (size_t i2 = 0; i2 < b2.size(); ++i2)
            for (size_t j1 = 0; j1 < b1.size(); ++j1)
                for (size_t j2 = 0; j2 < b2.size(); ++j2) {
                    if (nf(b1[i1], b2[i2]) == nf(b1[j1], b2[j2])) continue;
                    CHECK(std::abs(r.S.entries(i1 * 4 + i2, j1 * 4 + j2)) < 1e-10);
                }
}
