#include <Eigen/LU>
#include <sstream>

#include "smatrix_internal.hpp"

namespace qsu22 {

StatePair subspace_I_state(int M1, int M2, int k1, int k2) {
    if (k1 < 0 || k1 > M1 - 1 || k2 < 0 || k2 > M2 - 1) return std::nullopt;
    return std::make_pair(BasisState{0, 1, k1, M1 - k1 - 1},
                          BasisState{0, 1, k2, M2 - k2 - 1});
}

namespace {

StatePair check_pair(BasisState a, BasisState b, int M1, int M2) {
    if (basis_index(a, M1) < 0 || basis_index(b, M2) < 0) return std::nullopt;
    return std::make_pair(a, b);
}

}  // namespace

StatePair subspace_II_state(int M1, int M2, int slot, int k1, int k2) {
    switch (slot) {
        case 1: return check_pair({0, 1, k1, M1 - k1 - 1}, {0, 0, k2, M2 - k2}, M1, M2);
        case 2: return check_pair({0, 0, k1, M1 - k1}, {0, 1, k2, M2 - k2 - 1}, M1, M2);
        case 3: return check_pair({0, 1, k1, M1 - k1 - 1}, {1, 1, k2 - 1, M2 - k2 - 1}, M1, M2);
        case 4: return check_pair({1, 1, k1 - 1, M1 - k1 - 1}, {0, 1, k2, M2 - k2 - 1}, M1, M2);
    }
    throw std::invalid_argument("subspace_II_state: slot out of range");
}

StatePair subspace_III_state(int M1, int M2, int slot, int k1, int k2) {
    switch (slot) {
        case 1: return check_pair({0, 0, k1, M1 - k1}, {0, 0, k2, M2 - k2}, M1, M2);
        case 2: return check_pair({0, 0, k1, M1 - k1}, {1, 1, k2 - 1, M2 - k2 - 1}, M1, M2);
        case 3: return check_pair({1, 1, k1 - 1, M1 - k1 - 1}, {0, 0, k2, M2 - k2}, M1, M2);
        case 4: return check_pair({1, 1, k1 - 1, M1 - k1 - 1}, {1, 1, k2 - 1, M2 - k2 - 1}, M1, M2);
        case 5: return check_pair({1, 0, k1 - 1, M1 - k1}, {0, 1, k2, M2 - k2 - 1}, M1, M2);
        case 6: return check_pair({0, 1, k1, M1 - k1 - 1}, {1, 0, k2 - 1, M2 - k2}, M1, M2);
    }
    throw std::invalid_argument("subspace_III_state: slot out of range");
}

Cplx coeff_D(const Kinematics& k1, const Kinematics& k2) {
    const double scale = std::max(std::abs(k1.xminus), std::abs(k2.xplus));
    if (std::abs(k1.xminus - k2.xplus) < 1e-8 * scale)
        throw pole_error("coeff_D: x1^- = x2^+");
    const Cplx q = k1.params.q;
    const int dM = k1.M - k2.M;
    const Cplx x_form = std::pow(std::sqrt(q), -dM) * (k2.U * k2.V / (k1.U * k1.V)) *
                        (k1.xplus - k2.xminus) / (k1.xminus - k2.xplus);
    const Cplx a1 = k1.labels.a, a2 = k2.labels.a;
    const Cplx at1 = k1.affine_labels.a, at2 = k2.affine_labels.a;
    const Cplx label_form =
        -std::pow(std::sqrt(q), k2.M - k1.M) *
        (a2 * at1 * k2.U_tilde * k2.V_tilde - a1 * at2 * k2.V * k2.U) /
        (a1 * at2 * k1.U_tilde * k1.V_tilde - a2 * at1 * k1.V * k1.U);
    if (!approx_eq(x_form, label_form, Tolerance{1e-9, 1e-12}))
        throw std::runtime_error("coeff_D: the two equivalent forms disagree");
    return x_form;
}

namespace {

template <typename R>
std::complex<R> block_X_impl(int M1, int M2, int k1, int k2, int n,
                             std::complex<R> z12, std::complex<R> q,
                             bool pole_check) {
    using C = std::complex<R>;
    if (k1 < 0 || k1 > M1 - 1 || k2 < 0 || k2 > M2 - 1) return C(0);
    const int K = k1 + k2;
    if (n < 0 || n > K) return C(0);
    const int M = M1 + M2;
    C num(1);
    for (int i = 1; i <= n; ++i) num *= detail::qnumber_t<R>(M1 - i, q);
    for (int j = 1; j <= K - n; ++j) num *= detail::qnumber_t<R>(M2 - j, q);
    if (num == C(0)) return C(0);
    C den(1);
    for (int i = 1; i <= k1; ++i) den *= detail::qnumber_t<R>(M1 - i, q);
    for (int j = 1; j <= k2; ++j) den *= detail::qnumber_t<R>(M2 - j, q);
    C pden(1);
    for (int l = 1; l <= K; ++l) {
        const C f = z12 - std::pow(q, C(R(M - 2 * l)));
        if (pole_check && std::abs(f) < 1e-8 * std::max(R(1), std::abs(z12))) {
            std::ostringstream msg;
            msg << "block_X: pole locus z12 = q^(M-2l) at l = " << l;
            throw pole_error(msg.str());
        }
        pden *= f;
    }
    C total(0);
    for (int m = 0; m <= k1; ++m) {
        const C qb = detail::qbinomial_t<R>(k1, m, q) * detail::qbinomial_t<R>(k2, n - m, q);
        if (qb == C(0)) continue;
        C t = std::pow(z12, C(R(n - m))) *
              std::pow(q, C(R(k2 * (n - m) - k1 * m - k2 * k2))) * qb;
        for (int p = 0; p <= m - 1; ++p)
            t *= z12 * std::pow(q, C(R(M2 + 2 * p))) - std::pow(q, C(R(M1)));
        for (int p = 1 + m; p <= k1; ++p)
            t *= C(1) - std::pow(q, C(R(2 * (M1 - p))));
        for (int p = 1; p <= n - m; ++p)
            t *= C(1) - std::pow(q, C(R(2 * (M2 - K + n - p))));
        for (int p = -m; p <= k2 - n - 1; ++p)
            t *= z12 * std::pow(q, C(R(M1 + 2 * p))) - std::pow(q, C(R(M2)));
        total += t;
    }
    return (num / den) * total / pden;
}

}  // namespace

Cplx block_X(int M1, int M2, int k1, int k2, int n, Cplx z12, Cplx q) {
    return block_X_impl<double>(M1, M2, k1, k2, n, z12, q, true);
}

std::complex<long double> block_X_ld(int M1, int M2, int k1, int k2, int n,
                                     std::complex<long double> z12,
                                     std::complex<long double> q) {
    return block_X_impl<long double>(M1, M2, k1, k2, n, z12, q, true);
}

// ---------------------------------------------------------------------------
// Subspace II charge coefficients and the factorized inverse
// ---------------------------------------------------------------------------

namespace sII {

// Raising-charge coefficients Q_i / Q_i^op for the node-2 family, or the
// node-4 family when `affine`.
std::array<Cplx, 4> Q_row(const Kinematics& K1, const Kinematics& K2,
                          int k1, int k2, bool affine, bool op) {
    const Cplx q = K1.params.q;
    const int M1 = K1.M, M2 = K2.M;
    const Cplx a1 = affine ? K1.affine_labels.a : K1.labels.a;
    const Cplx a2 = affine ? K2.affine_labels.a : K2.labels.a;
    const Cplx b1 = affine ? K1.affine_labels.b : K1.labels.b;
    const Cplx b2 = affine ? K2.affine_labels.b : K2.labels.b;
    const Cplx U1 = affine ? K1.U_tilde : K1.U;
    const Cplx V1 = affine ? K1.V_tilde : K1.V;
    const Cplx U2 = affine ? K2.U_tilde : K2.U;
    const Cplx V2 = affine ? K2.V_tilde : K2.V;
    if (!op) {
        const Cplx f = std::pow(K1.sqrt_q, M1 - 2 * k1);
        return {-f * a2 * U1 * V1 * qnumber(M2 - k2, q), a1 * qnumber(M1 - k1, q),
                -f * b2 * U1 * V1, b1};
    }
    const Cplx f = std::pow(K2.sqrt_q, M2 - 2 * k2);
    return {-a2 * qnumber(M2 - k2, q), f * a1 * U2 * V2 * qnumber(M1 - k1, q),
            -b2, f * b1 * U2 * V2};
}

// Lowering-composite coefficients Z_i^op at the out-label (n, K-n).
std::array<Cplx, 4> Z_row_op(const Kinematics& K1, const Kinematics& K2,
                             int n, int K, bool affine) {
    const Cplx q = K1.params.q;
    const int M1 = K1.M, M2 = K2.M;
    const Cplx c1 = affine ? K1.affine_labels.c : K1.labels.c;
    const Cplx c2 = affine ? K2.affine_labels.c : K2.labels.c;
    const Cplx d1 = affine ? K1.affine_labels.d : K1.labels.d;
    const Cplx d2 = affine ? K2.affine_labels.d : K2.labels.d;
    // the partner family's central elements enter here
    const Cplx Ut2 = affine ? K2.U : K2.U_tilde;
    const Cplx Vt1 = affine ? K1.V : K1.V_tilde;
    const Cplx f1 = std::pow(q, n - K) / std::pow(K1.sqrt_q, M1);
    const Cplx f2 = std::pow(q, n - K) * std::pow(K1.sqrt_q, M1);
    return {c2 * Vt1 * qnumber(M2 - K + n, q),
            c1 * Ut2 * qnumber(n - M1, q) * f1,
            d2 * Vt1 * std::pow(q, -M2),
            -d1 * Ut2 * f2};
}

// Z_i at the in-label (k1, k2); depends on the out-label through q^{2n}.
std::array<Cplx, 4> Z_row(const Kinematics& K1, const Kinematics& K2,
                          int k1, int k2, int n, Cplx z12, bool affine) {
    const Cplx q = K1.params.q;
    const int M1 = K1.M, M2 = K2.M;
    const int M = M1 + M2, dM = M1 - M2, K = k1 + k2;
    const Cplx c1 = affine ? K1.affine_labels.c : K1.labels.c;
    const Cplx c2 = affine ? K2.affine_labels.c : K2.labels.c;
    const Cplx d1 = affine ? K1.affine_labels.d : K1.labels.d;
    const Cplx d2 = affine ? K2.affine_labels.d : K2.labels.d;
    const Cplx Ut1 = affine ? K1.U : K1.U_tilde;
    const Cplx Vt2 = affine ? K2.V : K2.V_tilde;
    const Cplx den = std::pow(q, M) * z12 - std::pow(q, 2 * (K + 1));
    const int kb1 = M1 - k1 - 1, kb2 = M2 - k2 - 1;
    const Cplx z21 = 1.0 / z12;
    const Cplx q2n = std::pow(q, 2 * n);
    const Cplx t1 = q2n * z12 - std::pow(q, dM) * (std::pow(q, 2 * (n - kb1)) - 1.0) -
                    std::pow(q, 2 * k2 + dM);
    const Cplx t2 = q2n * z21 - std::pow(q, dM) * (std::pow(q, 2 * (n + kb2)) - std::pow(q, 2 * K)) -
                    std::pow(q, 2 * k2 + dM);
    const Cplx t3 = q2n * z12 - std::pow(q, M) * (std::pow(q, 2 * (n - kb1)) - 1.0) -
                    std::pow(q, 2 * k2 + dM);
    const Cplx t4 = q2n * z21 - std::pow(q, -M) * (std::pow(q, 2 * (n + kb2)) - std::pow(q, 2 * K)) -
                    std::pow(q, 2 * k2 + dM);
    const Cplx fa = std::pow(K1.sqrt_q, M1 - 2 * k1);
    return {c2 * Ut1 * qnumber(kb2 + 1, q) / den * fa * std::pow(q, M2) * t1,
            z12 * c1 * Vt2 * qnumber(kb1 + 1, q) / den *
                std::pow(K1.sqrt_q, -dM) * std::pow(q, 2) * t2,
            d2 * Ut1 / den * fa * t3,
            z12 * d1 * Vt2 / den * std::pow(K1.sqrt_q, M) * std::pow(q, 2) * t4};
}

Matrix4 A_matrix(const Kinematics& K1, const Kinematics& K2, int n, int K) {
    Matrix4 A;
    const auto r1 = Q_row(K1, K2, n, K - n, false, true);
    const auto r2 = Q_row(K1, K2, n, K - n, true, true);
    const auto r3 = Z_row_op(K1, K2, n, K, false);
    const auto r4 = Z_row_op(K1, K2, n, K, true);
    for (int j = 0; j < 4; ++j) {
        A(0, j) = r1[j];
        A(1, j) = r2[j];
        A(2, j) = r3[j];
        A(3, j) = r4[j];
    }
    return A;
}

Matrix4 B_matrix(const Kinematics& K1, const Kinematics& K2,
                 int k1, int k2, int n, Cplx z12) {
    Matrix4 B;
    const auto r1 = Q_row(K1, K2, k1, k2, false, false);
    const auto r2 = Q_row(K1, K2, k1, k2, true, false);
    const auto r3 = Z_row(K1, K2, k1, k2, n, z12, false);
    const auto r4 = Z_row(K1, K2, k1, k2, n, z12, true);
    for (int j = 0; j < 4; ++j) {
        B(0, j) = r1[j];
        B(1, j) = r2[j];
        B(2, j) = r3[j];
        B(3, j) = r4[j];
    }
    return B;
}

std::pair<Matrix4, Matrix4> Bpm_matrices(const Kinematics& K1, const Kinematics& K2,
                                         int k1, int k2, int n, Cplx z12) {
    const Cplx q = K1.params.q;
    const int M1 = K1.M, M2 = K2.M, M = M1 + M2, dM = M1 - M2, K = k1 + k2;
    const int kb1 = M1 - k1 - 1, kb2 = M2 - k2 - 1;
    const Cplx den = std::pow(q, M) * z12 - std::pow(q, 2 * (K + 1));
    Matrix4 Bp = Matrix4::Zero(), Bm = Matrix4::Zero();
    const Cplx fp = qnumber(kb1, q) * std::pow(q, 1 + k1 - k2) / std::pow(K1.sqrt_q, M1) *
                    (q - 1.0 / q) *
                    (std::pow(q, M1 + 2 * k2) * z12 - std::pow(q, M2 + 2 * (n + 1))) / den;
    Bp(2, 0) = -K2.labels.c * K1.U_tilde * qnumber(k2, q);
    Bp(2, 2) = K2.labels.d * K1.U_tilde;
    Bp(3, 0) = -K2.affine_labels.c * K1.U * qnumber(k2, q);
    Bp(3, 2) = K2.affine_labels.d * K1.U;
    Bp *= fp;
    const Cplx fm = qnumber(kb2, q) * std::pow(q, 1 - k1) * std::pow(K1.sqrt_q, dM) *
                    (q - 1.0 / q) *
                    (std::pow(q, M2 + 2 * n) * z12 - std::pow(q, M1 + 2 * (k2 + 1))) / den;
    Bm(2, 1) = -K1.labels.c * K2.V_tilde * qnumber(k1, q);
    Bm(2, 3) = K1.labels.d * K2.V_tilde;
    Bm(3, 1) = -K1.affine_labels.c * K2.V * qnumber(k1, q);
    Bm(3, 3) = K1.affine_labels.d * K2.V;
    Bm *= fm;
    return {Bp, Bm};
}

// Factorized inverse of A: the C * V * D decomposition.  The sign of the
// first two diagonal entries of D is fixed by requiring (CVD) A = 1.
Matrix4 factorized_inverse(const Kinematics& K1, const Kinematics& K2,
                           int n, int K, Cplx z12) {
    const Cplx q = K1.params.q;
    const int M1 = K1.M, M2 = K2.M;
    const Cplx at = K1.params.alpha_tilde;
    const Cplx al = K1.params.alpha;
    const Cplx xi = K1.xi;
    const double g = K1.params.g;
    const Cplx gt = K1.g_tilde;
    const Cplx U2V2 = K2.U * K2.V;
    const Cplx qq = std::pow(q, K - n) / std::pow(K2.sqrt_q, M2);
    const Cplx qn_lo = qnumber(M2 - K + n, q);
    const Cplx qn_nm = qnumber(n - M1, q);
    if (std::abs(qn_lo) < 1e-13 || std::abs(qn_nm) < 1e-13)
        throw degenerate_kinematics_error("block_Y: factorized inverse singular at this label");
    Matrix4 C = Matrix4::Zero();
    C(0, 0) = z12 * K2.affine_labels.b / qn_lo;
    C(0, 2) = z12 * at * K2.labels.b / qn_lo;
    C(1, 1) = qq * at * K1.labels.b * U2V2 / qn_nm;
    C(1, 3) = qq * K1.affine_labels.b / (qnumber(M1 - n, q) * U2V2);
    C(2, 0) = -z12 * K2.affine_labels.a;
    C(2, 2) = -z12 * at * K2.labels.a;
    C(3, 1) = qq * at * K1.labels.a * U2V2;
    C(3, 3) = -qq * K1.affine_labels.a / U2V2;

    Matrix4 D = Matrix4::Zero();
    D(0, 0) = -Cplx(0, 1) * g * xi / (gt * al * at * K2.z);
    D(1, 1) = -Cplx(0, 1) * g * xi / (gt * al * at * at * K2.z);
    D(2, 2) = std::pow(K2.sqrt_q, M2) / (K1.V_tilde * K2.V_tilde * at);
    D(3, 3) = std::pow(K2.sqrt_q, M2) / (K1.V * K2.V);

    const Cplx Uz = z12 - K1.U * K1.U * K2.U * K2.U;
    const Cplx Utz = z12 - K1.U_tilde * K1.U_tilde * K2.U_tilde * K2.U_tilde;
    const Cplx Vz = z12 - K1.V * K1.V * K2.V * K2.V;
    const Cplx Vtz = z12 - K1.V_tilde * K1.V_tilde * K2.V_tilde * K2.V_tilde;
    const Cplx W = Vtz * Vz - Utz * Uz * xi * xi;
    if (std::abs(W) < 1e-13)
        throw degenerate_kinematics_error("block_Y: W = 0 in the factorized inverse");
    const Cplx i(0, 1);
    Matrix4 V;
    V(0, 0) = (1.0 / (i * xi)) * (Uz * xi * xi - Vz + (Vtz * Vz - Utz * Uz * xi * xi) / z12);
    V(0, 1) = Vz - Uz;
    V(0, 2) = i * xi * Uz;
    V(0, 3) = -Vz;
    V(1, 0) = Utz - Vtz;
    V(1, 1) = (i / xi) * (Vtz - Utz * xi * xi);
    V(1, 2) = Vtz;
    V(1, 3) = i * Utz * xi;
    V(2, 0) = Vtz - Utz;
    V(2, 1) = (i / xi) * (Utz * xi * xi - Vtz + (Vtz * Vz - Utz * Uz * xi * xi) / z12);
    V(2, 2) = -Vtz;
    V(2, 3) = -i * Utz * xi;
    V(3, 0) = (i / xi) * (Vz - Uz * xi * xi);
    V(3, 1) = Vz - Uz;
    V(3, 2) = i * Uz * xi;
    V(3, 3) = -Vz;
    V /= W;
    return C * V * D;
}

Matrix4 rhs_matrix(const Kinematics& K1, const Kinematics& K2,
                   int k1, int k2, int n, Cplx z12, Cplx D) {
    const Cplx q = K1.params.q;
    const Matrix4 B = B_matrix(K1, K2, k1, k2, n, z12);
    const auto [Bp, Bm] = Bpm_matrices(K1, K2, k1, k2, n, z12);
    const Cplx X0 = D * block_X(K1.M, K2.M, k1, k2, n, z12, q);
    const Cplx Xp = D * block_X(K1.M, K2.M, k1 + 1, k2 - 1, n, z12, q);
    const Cplx Xm = D * block_X(K1.M, K2.M, k1 - 1, k2 + 1, n, z12, q);
    return B * X0 + Bp * Xp + Bm * Xm;
}

}  // namespace sII

Matrix4 block_Y(int M1, int M2, int k1, int k2, int n,
                const Kinematics& kin1, const Kinematics& kin2) {
    if (kin1.M != M1 || kin2.M != M2)
        throw std::invalid_argument("block_Y: kinematics do not match (M1, M2)");
    const int K = k1 + k2;
    if (n < 0 || n > K || n > M1 - 1 || K - n > M2 - 1 || K - n < 0)
        throw std::invalid_argument("block_Y: out-label (n, K-n) outside the basis range");
    const Cplx z12 = kin1.z / kin2.z;
    const Cplx D = coeff_D(kin1, kin2);
    const Matrix4 A = sII::A_matrix(kin1, kin2, n, K);
    const Matrix4 Ainv = sII::factorized_inverse(kin1, kin2, n, K, z12);
    const double inv_err = (Ainv * A - Matrix4::Identity()).cwiseAbs().maxCoeff();
    if (inv_err > 1e-10)
        throw degenerate_kinematics_error("block_Y: factorized inverse check failed");
    const Matrix4 RHS = sII::rhs_matrix(kin1, kin2, k1, k2, n, z12, D);
    const Matrix4 Y = Ainv * RHS;
    // generic solve of the same linear system as an independent route
    const Matrix4 Y_lu = A.fullPivLu().solve(RHS);
    const double scale = std::max(1.0, Y.cwiseAbs().maxCoeff());
    if ((Y - Y_lu).cwiseAbs().maxCoeff() / scale > 1e-8)
        throw degenerate_kinematics_error("block_Y: generic solve disagrees with the factorized inverse");
    return Y;
}

YTable make_y_table(const Kinematics& kin1, const Kinematics& kin2) {
    const int M1 = kin1.M, M2 = kin2.M;
    return [&kin1, &kin2, M1, M2](int k1, int k2, int n) -> Matrix4 {
        const int K = k1 + k2;
        if (k1 < 0 || k2 < 0 || n < 0 || n > K || n > M1 - 1 || K - n > M2 - 1 || K - n < 0)
            return Matrix4::Zero();
        if (k1 > M1 || k2 > M2) return Matrix4::Zero();
        return block_Y(M1, M2, k1, k2, n, kin1, kin2);
    };
}

// ---------------------------------------------------------------------------
// Subspace III charge matrices and the factorized inverse
// ---------------------------------------------------------------------------

namespace sIII {

// Matrix of the node-2 raising charge between subspace III (columns) and
// subspace II (rows).  `op` selects the opposite coproduct; `affine` the
// node-4 family.
Eigen::Matrix<Cplx, 4, 6> G_matrix(const Kinematics& K1, const Kinematics& K2,
                                   int k1, int k2, int Ksec, bool op, bool affine) {
    const Cplx q = K1.params.q;
    const int M1 = K1.M, M2 = K2.M;
    const Cplx a1 = affine ? K1.affine_labels.a : K1.labels.a;
    const Cplx a2 = affine ? K2.affine_labels.a : K2.labels.a;
    const Cplx b1 = affine ? K1.affine_labels.b : K1.labels.b;
    const Cplx b2 = affine ? K2.affine_labels.b : K2.labels.b;
    const Cplx UV1 = affine ? (K1.U * K1.V) : (K1.U_tilde * K1.V_tilde);
    const Cplx UV2 = affine ? (K2.U * K2.V) : (K2.U_tilde * K2.V_tilde);
    Eigen::Matrix<Cplx, 4, 6> G = Eigen::Matrix<Cplx, 4, 6>::Zero();
    if (!op) {
        const Cplx f = std::pow(K1.sqrt_q, M1 - 2 * k1);
        const Cplx qa1 = qnumber(M1 - k1, q) * a1;
        const Cplx qa2 = f * qnumber(M2 - k2, q) * a2 / UV1;
        G(0, 0) = qa1;           G(0, 2) = b1;            G(0, 5) = -f * b2 / UV1;
        G(1, 0) = qa2;           G(1, 1) = f * b2 / UV1;  G(1, 4) = b1;
        G(2, 1) = qa1;           G(2, 3) = b1;            G(2, 5) = qa2;
        G(3, 2) = qa2;           G(3, 3) = f * b2 / UV1;  G(3, 4) = -qa1;
    } else {
        const int n = k1;  // op side is evaluated at (n, K-n)
        const Cplx f = std::pow(K2.sqrt_q, M2) * std::pow(q, n - Ksec);
        const Cplx qa1 = f * qnumber(M1 - n, q) * a1 / UV2;
        const Cplx qa2 = qnumber(M2 - Ksec + n, q) * a2;
        G(0, 0) = qa1;           G(0, 2) = f * b1 / UV2;  G(0, 5) = -b2;
        G(1, 0) = qa2;           G(1, 1) = b2;            G(1, 4) = f * b1 / UV2;
        G(2, 1) = qa1;           G(2, 3) = f * b1 / UV2;  G(2, 5) = qa2;
        G(3, 2) = qa2;           G(3, 3) = b2;            G(3, 4) = -qa1;
    }
    return G;
}

// Matrix of the composite lowering charge (node-3 then node-2 family).
Eigen::Matrix<Cplx, 4, 6> H_matrix(const Kinematics& K1, const Kinematics& K2,
                                   int k1, int k2, int Ksec, bool op, bool affine) {
    const Cplx q = K1.params.q;
    const int M1 = K1.M, M2 = K2.M;
    const Cplx c1 = affine ? K1.affine_labels.c : K1.labels.c;
    const Cplx c2 = affine ? K2.affine_labels.c : K2.labels.c;
    const Cplx d1 = affine ? K1.affine_labels.d : K1.labels.d;
    const Cplx d2 = affine ? K2.affine_labels.d : K2.labels.d;
    const Cplx U2 = affine ? K2.U_tilde : K2.U;
    const Cplx V1 = affine ? K1.V_tilde : K1.V;
    const Cplx V2 = affine ? K2.V_tilde : K2.V;
    const Cplx Ut1 = affine ? K1.U : K1.U_tilde;
    Eigen::Matrix<Cplx, 4, 6> H = Eigen::Matrix<Cplx, 4, 6>::Zero();
    if (!op) {
        const Cplx f = std::pow(q, k2) / std::pow(K2.sqrt_q, M2);
        const Cplx t1 = f * qnumber(k1, q) * c1 / V2;
        const Cplx t2 = qnumber(k2, q) * c2 * Ut1;
        H(0, 0) = t1;            H(0, 2) = -f * d1 / V2;  H(0, 4) = -d2 * Ut1;
        H(1, 0) = t2;            H(1, 1) = -d2 * Ut1;     H(1, 5) = f * d1 / V2;
        H(2, 1) = t1;            H(2, 3) = -f * d1 / V2;  H(2, 4) = -t2;
        H(3, 2) = t2;            H(3, 3) = -d2 * Ut1;     H(3, 5) = t1;
    } else {
        const int n = k1;
        const Cplx f = std::pow(q, n) / std::pow(K1.sqrt_q, M1);
        const Cplx t1 = qnumber(n, q) * c1 / U2;
        const Cplx t2 = f * qnumber(Ksec - n, q) * c2 / V1;
        H(0, 0) = t1;            H(0, 2) = -d1 / U2;      H(0, 4) = -f * d2 / V1;
        H(1, 0) = t2;            H(1, 1) = -f * d2 / V1;  H(1, 5) = d1 / U2;
        H(2, 1) = t1;            H(2, 3) = -d1 / U2;      H(2, 4) = -t2;
        H(3, 2) = t2;            H(3, 3) = -f * d2 / V1;  H(3, 5) = t1;
    }
    return H;
}

Eigen::Matrix<Cplx, 4, 6> G_bar(const Kinematics& K1, const Kinematics& K2,
                                int k1, int k2, int n, int Ksec, bool op) {
    const Cplx pref = std::pow(K1.params.q, Ksec - n) / std::pow(K2.sqrt_q, K2.M);
    return pref * (K2.affine_labels.a * G_matrix(K1, K2, k1, k2, Ksec, op, false) -
                   K2.labels.a * G_matrix(K1, K2, k1, k2, Ksec, op, true));
}

Eigen::Matrix<Cplx, 4, 6> H_bar(const Kinematics& K1, const Kinematics& K2,
                                int k1, int k2, int Ksec, bool op) {
    return K2.affine_labels.c * K1.V * H_matrix(K1, K2, k1, k2, Ksec, op, false) -
           K2.labels.c / K1.V * H_matrix(K1, K2, k1, k2, Ksec, op, true);
}

struct ACoeffs {
    Cplx A0, A1, A2, A3, A4;
};

ACoeffs a_coeffs(const Kinematics& K1, const Kinematics& K2, int n) {
    const Cplx q = K1.params.q;
    ACoeffs c;
    const Cplx U2sq = K2.U * K2.U, V2sq = K2.V * K2.V, V1sq = K1.V * K1.V;
    c.A1 = K1.labels.b * K2.affine_labels.a * U2sq * V2sq - K2.labels.a * K1.affine_labels.b;
    c.A2 = K2.labels.c * K1.affine_labels.c * U2sq - K1.labels.c * V1sq * K2.affine_labels.c;
    c.A3 = K2.labels.a * K1.affine_labels.a - K1.labels.a * K2.affine_labels.a * U2sq * V2sq;
    c.A4 = K1.labels.d * K2.affine_labels.c * V1sq - K2.labels.c * K1.affine_labels.d * U2sq;
    c.A0 = qnumber(n, q) * c.A1 * c.A2 + qnumber(K1.M - n, q) * c.A3 * c.A4;
    return c;
}

Matrix6 A_matrix(const Kinematics& K1, const Kinematics& K2, int n, int Ksec) {
    const Cplx q = K1.params.q;
    const int M1 = K1.M;
    const auto c = a_coeffs(K1, K2, n);
    const Cplx zt2 = K1.g_tilde * K1.params.alpha * K1.params.alpha_tilde /
                     K1.params.g * K2.z;
    const Cplx q1 = std::pow(q, n) / std::pow(K1.sqrt_q, M1);
    const Cplx q2 = std::pow(q, Ksec - n) / std::pow(K2.sqrt_q, K2.M);
    const Cplx U2V2 = K2.U * K2.V, U2V1 = K2.U * K1.V;
    const Cplx gg = K1.g_tilde * K1.g_tilde / (K1.params.g * K1.params.g);
    Matrix6 A = Matrix6::Zero();
    A(0, 0) = -qnumber(M1 - n, q) * c.A3 / U2V2;
    A(0, 2) = c.A1 / U2V2;
    A(0, 5) = q2 * zt2;
    A(1, 1) = -q2 * zt2;
    A(1, 4) = c.A1 / U2V2;
    A(2, 1) = -qnumber(M1 - n, q) * c.A3 / U2V2;
    A(2, 3) = c.A1 / U2V2;
    A(3, 0) = -qnumber(n, q) * c.A2 / U2V1;
    A(3, 2) = -c.A4 / U2V1;
    A(3, 4) = gg * q1 / zt2;
    A(4, 1) = gg * q1 / zt2;
    A(4, 5) = c.A4 / U2V1;
    A(5, 1) = -qnumber(n, q) * c.A2 / U2V1;
    A(5, 3) = -c.A4 / U2V1;
    return A;
}

Matrix6 A_inverse(const Kinematics& K1, const Kinematics& K2, int n, int Ksec) {
    const Cplx q = K1.params.q;
    const int M1 = K1.M;
    const auto c = a_coeffs(K1, K2, n);
    if (std::abs(c.A0) < 1e-10 * std::max({std::abs(c.A1 * c.A2), std::abs(c.A3 * c.A4), 1e-30}))
        throw pole_error("block_Z: A0 = 0");
    const Cplx zt2 = K1.g_tilde * K1.params.alpha * K1.params.alpha_tilde /
                     K1.params.g * K2.z;
    const Cplx q1 = std::pow(q, n) / std::pow(K1.sqrt_q, M1);
    const Cplx q2 = std::pow(q, Ksec - n) / std::pow(K2.sqrt_q, K2.M);
    const Cplx U2 = K2.U, V1 = K1.V, V2 = K2.V;
    const Cplx gg = K1.g_tilde * K1.g_tilde / (K1.params.g * K1.params.g);
    const Cplx nq = qnumber(n, q), mq = qnumber(M1 - n, q);
    Matrix6 Ai = Matrix6::Zero();
    Ai(0, 0) = -U2 * V2 * c.A4 / c.A0;
    Ai(0, 1) = gg * q1 * U2 * U2 * V1 * V2 / (c.A0 * zt2);
    Ai(0, 3) = -U2 * V1 * c.A1 / c.A0;
    Ai(0, 4) = q2 * U2 * U2 * V1 * V2 * zt2 / c.A0;
    Ai(1, 2) = -U2 * V2 * c.A4 / c.A0;
    Ai(1, 5) = -U2 * V1 * c.A1 / c.A0;
    Ai(2, 0) = nq * U2 * V2 * c.A2 / c.A0;
    Ai(2, 1) = gg * mq * q1 * U2 * U2 * V1 * V2 * c.A3 / (c.A0 * c.A1 * zt2);
    Ai(2, 2) = -gg * q1 * q2 * U2 * U2 * U2 * V1 * V2 * V2 / (c.A0 * c.A1);
    Ai(2, 3) = -mq * U2 * V1 * c.A3 / c.A0;
    Ai(2, 4) = -nq * q2 * U2 * U2 * V1 * V2 * zt2 * c.A2 / (c.A0 * c.A4);
    Ai(2, 5) = -gg * q1 * q2 * U2 * U2 * U2 * V1 * V1 * V2 / (c.A0 * c.A4);
    Ai(3, 2) = nq * U2 * V2 * c.A2 / c.A0;
    Ai(3, 5) = -mq * U2 * V1 * c.A3 / c.A0;
    Ai(4, 1) = U2 * V2 / c.A1;
    Ai(4, 2) = -q2 * U2 * U2 * V2 * V2 * zt2 * c.A4 / (c.A0 * c.A1);
    Ai(4, 5) = -q2 * U2 * U2 * V1 * V2 * zt2 / c.A0;
    Ai(5, 2) = gg * q1 * U2 * U2 * V1 * V2 / (c.A0 * zt2);
    Ai(5, 4) = U2 * V1 / c.A4;
    Ai(5, 5) = gg * q1 * U2 * U2 * V1 * V1 * c.A1 / (c.A0 * c.A4 * zt2);
    return Ai;
}

Eigen::Matrix<Cplx, 8, 6> B_matrix(const Kinematics& K1, const Kinematics& K2,
                                   int k1, int k2, int n, int Ksec) {
    Eigen::Matrix<Cplx, 8, 6> B;
    B.topRows<4>() = G_bar(K1, K2, k1, k2, n, Ksec, false);
    B.bottomRows<4>() = H_bar(K1, K2, k1, k2, Ksec, false);
    return B;
}

// Index-shifted Y: entry (i,j) takes Y at (k1 - th_j, k2 + th_j - 1, n - th_i)
// with th odd-index = 1; out-of-range labels contribute 0.
Matrix4 Y_shifted(const YTable& Y, int k1, int k2, int n) {
    static constexpr int th[4] = {1, 0, 1, 0};
    Matrix4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(i, j) = Y(k1 - th[j], k2 + th[j] - 1, n - th[i])(i, j);
    return out;
}

Eigen::Matrix<Cplx, 6, 8> Y_check(const YTable& Y, int k1, int k2, int n) {
    Eigen::Matrix<Cplx, 6, 8> out = Eigen::Matrix<Cplx, 6, 8>::Zero();
    out.topLeftCorner<3, 4>() = Y(k1, k2, n).topRows<3>();
    out.bottomRightCorner<3, 4>() = Y_shifted(Y, k1, k2, n).topRows<3>();
    return out;
}

}  // namespace sIII

Matrix6 block_Z(int M1, int M2, int k1, int k2, int n,
                const Kinematics& kin1, const Kinematics& kin2,
                const YTable& yblocks) {
    if (kin1.M != M1 || kin2.M != M2)
        throw std::invalid_argument("block_Z: kinematics do not match (M1, M2)");
    const int K = k1 + k2;
    if (n < 0 || n > K)
        throw std::invalid_argument("block_Z: out-label outside the sector");
    const Matrix6 A = sIII::A_matrix(kin1, kin2, n, K);
    const Matrix6 Ainv = sIII::A_inverse(kin1, kin2, n, K);
    const double inv_err = (Ainv * A - Matrix6::Identity()).cwiseAbs().maxCoeff();
    if (inv_err > 1e-10)
        throw degenerate_kinematics_error("block_Z: factorized inverse check failed");
    const Eigen::Matrix<Cplx, 6, 8> Yc = sIII::Y_check(yblocks, k1, k2, n);
    const Eigen::Matrix<Cplx, 8, 6> B = sIII::B_matrix(kin1, kin2, k1, k2, n, K);
    const Matrix6 RHS = Yc * B;
    const Matrix6 Z = Ainv * RHS;
    const Matrix6 Z_lu = A.fullPivLu().solve(RHS);
    const double scale = std::max(1.0, Z.cwiseAbs().maxCoeff());
    if ((Z - Z_lu).cwiseAbs().maxCoeff() / scale > 1e-8)
        throw degenerate_kinematics_error("block_Z: generic solve disagrees with the factorized inverse");
    return Z;
}

}  // namespace qsu22
