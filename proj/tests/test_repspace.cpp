#include <doctest.h>

#include <random>

#include "qsu22/repspace.hpp"

using namespace qsu22;

namespace {

Kinematics make_point(Cplx q, double g, int M, Cplx xp, Cplx gamma = Cplx(0.8, 0.2),
                      Cplx alpha = Cplx(1.1, -0.1), Cplx alpha_t = Cplx(0.9, 0.15)) {
    ModelParams p{q, g, alpha, alpha_t};
    const auto roots = solve_mass_shell(xp, p, M);
    return build_kinematics(xp, roots[0], gamma, p, M);
}

}  // namespace

TEST_CASE("basis enumeration") {
    CHECK(enumerate_basis(1).size() == 4);
    CHECK(enumerate_basis(2).size() == 8);
    const auto b3 = enumerate_basis(3);
    CHECK(b3.size() == 12);
    CHECK(b3.front() == BasisState{0, 0, 0, 3});
    // (m,n) blocks in order, k ascending within each
    CHECK(b3[1] == BasisState{0, 0, 1, 2});
    CHECK(b3[4] == BasisState{0, 1, 0, 2});
    for (int M : {1, 2, 4}) {
        const auto basis = enumerate_basis(M);
        for (size_t i = 0; i < basis.size(); ++i) {
            CHECK(basis[i].m + basis[i].n + basis[i].k + basis[i].l == M);
            CHECK(basis_index(basis[i], M) == int(i));
        }
    }
    CHECK(basis_index({0, 0, -1, 4}, 3) == -1);
    CHECK(basis_index({2, 0, 1, 0}, 3) == -1);
    CHECK_THROWS_AS(enumerate_basis(0), std::domain_error);
}

TEST_CASE("generator actions match the defining rules") {
    const int M = 3;
    const Kinematics kin = make_point(Cplx(1.08, 0.05), 0.8, M, Cplx(1.8, 0.7));
    const Cplx q = kin.params.q;
    const auto basis = enumerate_basis(M);
    const Matrix H1 = generator_action({1, GenKind::H}, kin).entries;
    for (size_t j = 0; j < basis.size(); ++j)
        CHECK(std::abs(H1(j, j) - Cplx(basis[j].l - basis[j].k)) < 1e-15);
    // the raising charge on the lowest-weight boson state
    const Matrix E2 = generator_action({2, GenKind::E}, kin).entries;
    const int from = basis_index({0, 0, 0, M}, M);
    const int to = basis_index({0, 1, 0, M - 1}, M);
    for (int i = 0; i < 4 * M; ++i) {
        if (i == to)
            CHECK(std::abs(E2(i, from) - kin.labels.a * qnumber(M, q)) < 1e-13);
        else
            CHECK(std::abs(E2(i, from)) == 0.0);
    }
    // [E1, F1] = (K1 - K1^{-1}) / (q - 1/q)
    const Matrix E1 = generator_action({1, GenKind::E}, kin).entries;
    const Matrix F1 = generator_action({1, GenKind::F}, kin).entries;
    const Matrix K1 = generator_action({1, GenKind::K}, kin).entries;
    const Matrix comm = E1 * F1 - F1 * E1;
    const Matrix rhs = (K1 - K1.inverse()) / (q - 1.0 / q);
    CHECK((comm - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fermionic nilpotency") {
    const Kinematics kin = make_point(Cplx(1.06, 0.07), 0.9, 2, Cplx(2.0, -0.6));
    for (int node : {2, 4})
        for (GenKind kind : {GenKind::E, GenKind::F}) {
            const Matrix G = generator_action({node, kind}, kin).entries;
            CHECK((G * G).cwiseAbs().maxCoeff() < 1e-14);
        }
}

TEST_CASE("metric entries") {
    const Cplx q(1.11, 0.04);
    CHECK((metric(1, q).entries - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
    for (int M : {2, 3}) {
        const auto basis = enumerate_basis(M);
        const Matrix g = metric(M, q).entries;
        const int idx = basis_index({0, 1, 0, M - 1}, M);
        CHECK(std::abs(g(idx, idx) - 1.0 / qfactorial(M - 1, q)) < 1e-13);
        for (size_t j = 0; j < basis.size(); ++j)
            CHECK(std::abs(g(j, j) - 1.0 / (qfactorial(basis[j].k, q) *
                                            qfactorial(basis[j].l, q))) < 1e-13);
    }
}

TEST_CASE("algebra relations on one module") {
    for (int M : {1, 3}) {
        const Kinematics kin = make_point(Cplx(1.09, 0.06), 0.8, M, Cplx(1.7, 0.5));
        for (const auto& r : check_algebra_relations(kin)) {
            INFO(r.name);
            CHECK(r.residual_max < (M == 1 ? 1e-10 : 1e-9));
            CHECK(r.passed);
        }
    }
}

TEST_CASE("off-shell point fails the quartic relations") {
    const ModelParams p{Cplx(1.07, 0.04), 0.8};
    const auto roots = solve_mass_shell(Cplx(1.8, 0.6), p, 2);
    const Kinematics bad = build_kinematics(Cplx(1.8, 0.6), roots[0] + Cplx(1e-3, 0.0),
                                            Cplx(1, 0), p, 2, Tolerance{1e6, 1e6});
    double quartic = 0.0;
    for (const auto& r : check_algebra_relations(bad))
        if (r.name == "quartic-serre") quartic = r.residual_max;
    CHECK(quartic > 1e-6);
}

TEST_CASE("coproducts are algebra compatible") {
    const Kinematics k1 = make_point(Cplx(1.08, 0.06), 0.85, 2, Cplx(1.9, 0.7));
    const Kinematics k2 = make_point(Cplx(1.08, 0.06), 0.85, 1, Cplx(1.2, -0.9));
    for (const auto& r : check_coproduct_relations(k1, k2)) {
        INFO(r.name);
        CHECK(r.residual_max < 1e-9);
    }
}

TEST_CASE("group-like coproduct and the opposite coproduct") {
    const Kinematics k1 = make_point(Cplx(1.07, 0.04), 0.8, 1, Cplx(1.9, 0.7));
    const Kinematics k2 = make_point(Cplx(1.07, 0.04), 0.8, 2, Cplx(1.2, -0.9));
    // Delta(K1) = K1 x K1 exactly
    const Matrix K1a = generator_action({1, GenKind::K}, k1).entries;
    const Matrix K1b = generator_action({1, GenKind::K}, k2).entries;
    const Matrix DK = coproduct_action({1, GenKind::K}, k1, k2).entries;
    for (int i = 0; i < K1a.rows(); ++i)
        for (int j = 0; j < K1b.rows(); ++j)
            CHECK(std::abs(DK(i * K1b.rows() + j, i * K1b.rows() + j) -
                           K1a(i, i) * K1b(j, j)) < 1e-14);
    // the opposite coproduct is the graded-permutation conjugate
    const Matrix P12 = graded_permutation(k1.M, k2.M);
    const Matrix P21 = graded_permutation(k2.M, k1.M);
    const Matrix direct = coproduct_action({2, GenKind::E}, k2, k1).entries;
    const Matrix op = coproduct_action({2, GenKind::E}, k1, k2, true).entries;
    CHECK((op - P21 * direct * P12).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("raising the vacuum into the first invariant subspace") {
    // Delta(E2) Delta(E4) |vac> lands on the highest-weight state with the
    // expected coefficient
    const Kinematics k1 = make_point(Cplx(1.06, 0.05), 0.8, 2, Cplx(1.8, 0.6));
    const Kinematics k2 = make_point(Cplx(1.06, 0.05), 0.8, 2, Cplx(1.3, -0.8));
    const int d2 = 4 * k2.M;
    const Matrix DE2 = coproduct_action({2, GenKind::E}, k1, k2).entries;
    const Matrix DE4 = coproduct_action({4, GenKind::E}, k1, k2).entries;
    Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(16 * k1.M * k2.M);
    vac(basis_index({0, 0, 0, k1.M}, k1.M) * d2 + basis_index({0, 0, 0, k2.M}, k2.M)) = 1.0;
    const Eigen::VectorXcd out = DE2 * (DE4 * vac);
    const Cplx q = k1.params.q;
    const Cplx coef = std::pow(k1.sqrt_q, k1.M) * qnumber(k1.M, q) * qnumber(k2.M, q) *
                      (k1.labels.a * k2.affine_labels.a * k1.U_tilde * k1.V_tilde -
                       k2.labels.a * k1.affine_labels.a * k1.U * k1.V);
    const int hw = basis_index({0, 1, 0, k1.M - 1}, k1.M) * d2 +
                   basis_index({0, 1, 0, k2.M - 1}, k2.M);
    CHECK(std::abs(out(hw) - coef) < 1e-12);
    for (int i = 0; i < out.size(); ++i)
        if (i != hw) CHECK(std::abs(out(i)) < 1e-13);
}
