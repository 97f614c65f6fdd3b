#include "qsu22/repspace.hpp"

#include <cmath>

namespace qsu22 {

std::vector<BasisState> enumerate_basis(int M) {
    if (M < 1) throw std::domain_error("enumerate_basis: M < 1");
    std::vector<BasisState> out;
    out.reserve(4 * M);
    static constexpr int mn[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (const auto& p : mn) {
        const int rest = M - p[0] - p[1];
        for (int k = 0; k <= rest; ++k)
            out.push_back({p[0], p[1], k, rest - k});
    }
    return out;
}

int basis_index(const BasisState& s, int M) {
    if (s.m < 0 || s.m > 1 || s.n < 0 || s.n > 1 || s.k < 0 || s.l < 0) return -1;
    if (s.m + s.n + s.k + s.l != M) return -1;
    // offsets of the (m,n) blocks in the canonical order
    int off = 0;
    static constexpr int mn[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (const auto& p : mn) {
        if (p[0] == s.m && p[1] == s.n) return off + s.k;
        off += M - p[0] - p[1] + 1;
    }
    return -1;
}

namespace {

// One term of a generator's action: target state and coefficient.
struct Term {
    BasisState to;
    Cplx coef;
};

std::vector<Term> act(GeneratorId id, const BasisState& s, const Kinematics& kin) {
    const Cplx q = kin.params.q;
    const auto& L = kin.labels;
    const auto& A = kin.affine_labels;
    const double sgn_m = (s.m & 1) ? -1.0 : 1.0;
    switch (id.kind) {
        case GenKind::E:
            switch (id.node) {
                case 1: return {{{s.m, s.n, s.k - 1, s.l + 1}, qnumber(s.k, q)}};
                case 3: return {{{s.m + 1, s.n - 1, s.k, s.l}, 1.0}};
                case 2:
                    return {{{s.m, s.n + 1, s.k, s.l - 1}, L.a * sgn_m * qnumber(s.l, q)},
                            {{s.m - 1, s.n, s.k + 1, s.l}, L.b}};
                case 4:
                    return {{{s.m, s.n + 1, s.k, s.l - 1}, A.a * sgn_m * qnumber(s.l, q)},
                            {{s.m - 1, s.n, s.k + 1, s.l}, A.b}};
            }
            break;
        case GenKind::F:
            switch (id.node) {
                case 1: return {{{s.m, s.n, s.k + 1, s.l - 1}, qnumber(s.l, q)}};
                case 3: return {{{s.m - 1, s.n + 1, s.k, s.l}, 1.0}};
                case 2:
                    return {{{s.m + 1, s.n, s.k - 1, s.l}, L.c * qnumber(s.k, q)},
                            {{s.m, s.n - 1, s.k, s.l + 1}, L.d * sgn_m}};
                case 4:
                    return {{{s.m + 1, s.n, s.k - 1, s.l}, A.c * qnumber(s.k, q)},
                            {{s.m, s.n - 1, s.k, s.l + 1}, A.d * sgn_m}};
            }
            break;
        default:
            break;
    }
    throw std::invalid_argument("generator_action: unknown generator");
}

Cplx cartan_eigenvalue(GeneratorId id, const BasisState& s, const Kinematics& kin) {
    const Cplx q = kin.params.q;
    const Cplx lnq = std::log(q);
    switch (id.node) {
        case 1: return Cplx(double(s.l - s.k));
        case 3: return Cplx(double(s.n - s.m));
        case 2: return -std::log(kin.V) / lnq + 0.5 * double(s.k - s.l + s.m - s.n);
        case 4: return -std::log(kin.V_tilde) / lnq + 0.5 * double(s.k - s.l + s.m - s.n);
    }
    throw std::invalid_argument("cartan_eigenvalue: node out of range");
}

// K_j entry: q^{H_j}. For the fermionic nodes this is V^{-1} q^{(k-l+m-n)/2}
// with the cached principal sqrt(q), so no branch ambiguity enters.
Cplx k_eigenvalue(int node, const BasisState& s, const Kinematics& kin) {
    const Cplx q = kin.params.q;
    switch (node) {
        case 1: return std::pow(q, s.l - s.k);
        case 3: return std::pow(q, s.n - s.m);
        case 2: {
            const int e = s.k - s.l + s.m - s.n;
            return (1.0 / kin.V) * std::pow(kin.sqrt_q, e);
        }
        case 4: {
            const int e = s.k - s.l + s.m - s.n;
            return (1.0 / kin.V_tilde) * std::pow(kin.sqrt_q, e);
        }
    }
    throw std::invalid_argument("k_eigenvalue: node out of range");
}

}  // namespace

OperatorMatrix generator_action(GeneratorId id, const Kinematics& kin) {
    const int M = kin.M;
    const auto basis = enumerate_basis(M);
    const int d = int(basis.size());
    OperatorMatrix op;
    op.rows = op.cols = BasisDesc{{M}};
    op.entries = Matrix::Zero(d, d);
    if (id.kind == GenKind::K || id.kind == GenKind::H) {
        for (int j = 0; j < d; ++j)
            op.entries(j, j) = (id.kind == GenKind::K)
                                   ? k_eigenvalue(id.node, basis[j], kin)
                                   : cartan_eigenvalue(id, basis[j], kin);
        return op;
    }
    for (int j = 0; j < d; ++j) {
        for (const auto& t : act(id, basis[j], kin)) {
            const int i = basis_index(t.to, M);
            if (i >= 0) op.entries(i, j) += t.coef;
        }
    }
    return op;
}

Cplx braiding_scalar(int node, const Kinematics& kin) {
    if (node == 2) return kin.U;
    if (node == 4) return kin.U_tilde;
    throw std::invalid_argument("braiding_scalar: node must be 2 or 4");
}

namespace {

bool is_fermionic(GeneratorId id) {
    return (id.kind == GenKind::E || id.kind == GenKind::F) &&
           (id.node == 2 || id.node == 4);
}

// Graded Kronecker product: (A x B)(u x v) = (-1)^{deg B deg u} Au x Bv.
Matrix graded_kron(const Matrix& A, const Matrix& B, bool B_odd,
                   const std::vector<BasisState>& basis1) {
    const int d1 = int(A.rows());
    const int d2 = int(B.rows());
    Matrix out(d1 * d2, d1 * d2);
    for (int j1 = 0; j1 < d1; ++j1) {
        const double sgn = (B_odd && basis1[j1].grading()) ? -1.0 : 1.0;
        for (int i1 = 0; i1 < d1; ++i1)
            out.block(i1 * d2, j1 * d2, d2, d2) = (sgn * A(i1, j1)) * B;
    }
    return out;
}

Matrix coproduct_matrix(GeneratorId id, const Kinematics& k1, const Kinematics& k2) {
    const auto basis1 = enumerate_basis(k1.M);
    const int d1 = 4 * k1.M, d2 = 4 * k2.M;
    const Matrix I1 = Matrix::Identity(d1, d1);
    const Matrix I2 = Matrix::Identity(d2, d2);
    if (id.kind == GenKind::K) {
        const Matrix K1 = generator_action(id, k1).entries;
        const Matrix K2 = generator_action(id, k2).entries;
        return graded_kron(K1, K2, false, basis1);
    }
    if (id.kind == GenKind::H) {
        const Matrix H1 = generator_action(id, k1).entries;
        const Matrix H2 = generator_action(id, k2).entries;
        return graded_kron(H1, I2, false, basis1) + graded_kron(I1, H2, false, basis1);
    }
    const bool odd = is_fermionic(id);
    const Matrix G1 = generator_action(id, k1).entries;
    const Matrix G2 = generator_action(id, k2).entries;
    const GeneratorId kid{id.node, GenKind::K};
    if (id.kind == GenKind::E) {
        // E_j x 1 + K_j^{-1} U2^{d_j2} U4^{d_j4} x E_j
        Matrix first = generator_action(kid, k1).entries.inverse();
        if (id.node == 2 || id.node == 4) first *= braiding_scalar(id.node, k1);
        return graded_kron(G1, I2, false, basis1) + graded_kron(first, G2, odd, basis1);
    }
    // F_j x K_j + U2^{-d_j2} U4^{-d_j4} x F_j
    const Matrix K2 = generator_action(kid, k2).entries;
    Matrix first = I1;
    if (id.node == 2 || id.node == 4) first *= (1.0 / braiding_scalar(id.node, k1));
    return graded_kron(G1, K2, false, basis1) + graded_kron(first, G2, odd, basis1);
}

}  // namespace

Matrix graded_permutation(int M1, int M2) {
    const auto b1 = enumerate_basis(M1);
    const auto b2 = enumerate_basis(M2);
    const int d1 = int(b1.size()), d2 = int(b2.size());
    Matrix P = Matrix::Zero(d1 * d2, d1 * d2);
    for (int j1 = 0; j1 < d1; ++j1)
        for (int j2 = 0; j2 < d2; ++j2) {
            const double sgn = (b1[j1].grading() && b2[j2].grading()) ? -1.0 : 1.0;
            P(j2 * d1 + j1, j1 * d2 + j2) = sgn;
        }
    return P;
}

OperatorMatrix coproduct_action(GeneratorId id, const Kinematics& kin1,
                                const Kinematics& kin2, bool opposite) {
    OperatorMatrix op;
    op.rows = op.cols = BasisDesc{{kin1.M, kin2.M}};
    if (!opposite) {
        op.entries = coproduct_matrix(id, kin1, kin2);
        return op;
    }
    const Matrix P12 = graded_permutation(kin1.M, kin2.M);
    const Matrix P21 = graded_permutation(kin2.M, kin1.M);
    op.entries = P21 * coproduct_matrix(id, kin2, kin1) * P12;
    return op;
}

OperatorMatrix metric(int M, Cplx q) {
    const auto basis = enumerate_basis(M);
    OperatorMatrix op;
    op.rows = op.cols = BasisDesc{{M}};
    op.entries = Matrix::Zero(basis.size(), basis.size());
    for (size_t j = 0; j < basis.size(); ++j)
        op.entries(j, j) = 1.0 / (qfactorial(basis[j].k, q) * qfactorial(basis[j].l, q));
    return op;
}

namespace {

// Symmetrized Cartan matrix DA and normalization D of the Dynkin diagram.
constexpr int DA[4][4] = {{2, -1, 0, -1}, {-1, 0, 1, 0}, {0, 1, -2, 1}, {-1, 0, 1, 0}};
constexpr int Dj[4] = {1, -1, -1, -1};

struct RelationContext {
    std::array<Matrix, 5> E, F, K;  // 1-indexed by node
    Cplx q, gt, alpha, alpha_tilde;
    double g;
    Cplx U2, V2, U4, V4;  // central elements of fermionic node families
    Cplx braid2;          // the product of the node-2 braiding scalars
    int dim;

    double relnorm(const Matrix& X, const Matrix& ref) const {
        const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
        return X.cwiseAbs().maxCoeff() / scale;
    }
};

std::vector<VerificationReport> run_relation_checks(const RelationContext& cx,
                                                    const std::string& where,
                                                    double tolerance) {
    std::vector<VerificationReport> out;
    const Matrix I = Matrix::Identity(cx.dim, cx.dim);
    const Cplx q = cx.q;
    const auto push = [&](const std::string& name, double resid) {
        out.push_back(VerificationReport::make(name, where, resid, resid, tolerance));
    };

    double e = 0;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            const Cplx w = std::pow(q, DA[i - 1][j - 1]);
            e = std::max(e, cx.relnorm(cx.K[i] * cx.E[j] - w * cx.E[j] * cx.K[i], cx.E[j]));
            e = std::max(e, cx.relnorm(cx.K[i] * cx.F[j] - (1.0 / w) * cx.F[j] * cx.K[i], cx.F[j]));
        }
    push("cartan-chevalley", e);

    e = 0;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            const bool odd = (i == 2 || i == 4) && (j == 2 || j == 4);
            const Matrix br = odd ? Matrix(cx.E[i] * cx.F[j] + cx.F[j] * cx.E[i])
                                  : Matrix(cx.E[i] * cx.F[j] - cx.F[j] * cx.E[i]);
            Matrix rhs = Matrix::Zero(cx.dim, cx.dim);
            if (i == j) {
                rhs = double(Dj[j - 1]) * (cx.K[j] - cx.K[j].inverse()) / (q - 1.0 / q);
            } else if (i + j == 6) {
                if (i == 2)  // {E2, F4} = -g~ a~^{-1} (K4 - U2 U4^{-1} K2^{-1})
                    rhs = -cx.gt / cx.alpha_tilde *
                          (cx.K[4] - cx.braid2 * cx.braid2 * cx.K[2].inverse());
                else        // {E4, F2} = g~ a~ (K2 - U4 U2^{-1} K4^{-1})
                    rhs = cx.gt * cx.alpha_tilde *
                          (cx.K[2] - cx.K[4].inverse() / (cx.braid2 * cx.braid2));
            }
            e = std::max(e, cx.relnorm(br - rhs, cx.E[i] * cx.F[j] + rhs));
        }
    push("chevalley-brackets", e);

    e = 0;
    e = std::max(e, cx.relnorm(cx.E[1] * cx.E[3] - cx.E[3] * cx.E[1], cx.E[1]));
    e = std::max(e, cx.relnorm(cx.F[1] * cx.F[3] - cx.F[3] * cx.F[1], cx.F[1]));
    for (int k : {2, 4}) {
        e = std::max(e, cx.relnorm(cx.E[k] * cx.E[k], cx.E[k]));
        e = std::max(e, cx.relnorm(cx.F[k] * cx.F[k], cx.F[k]));
    }
    e = std::max(e, cx.relnorm(cx.E[2] * cx.E[4] + cx.E[4] * cx.E[2], cx.E[2]));
    e = std::max(e, cx.relnorm(cx.F[2] * cx.F[4] + cx.F[4] * cx.F[2], cx.F[2]));
    const Cplx cs = q - 2.0 + 1.0 / q;
    for (int j : {1, 3})
        for (int k : {2, 4}) {
            {
                const Matrix inner = cx.E[j] * cx.E[k] - cx.E[k] * cx.E[j];
                const Matrix lhs =
                    cx.E[j] * inner - inner * cx.E[j] - cs * cx.E[j] * cx.E[k] * cx.E[j];
                e = std::max(e, cx.relnorm(lhs, cx.E[j] * cx.E[k] * cx.E[j]));
            }
            {
                const Matrix inner = cx.F[j] * cx.F[k] - cx.F[k] * cx.F[j];
                const Matrix lhs =
                    cx.F[j] * inner - inner * cx.F[j] - cs * cx.F[j] * cx.F[k] * cx.F[j];
                e = std::max(e, cx.relnorm(lhs, cx.F[j] * cx.F[k] * cx.F[j]));
            }
        }
    push("serre", e);

    e = 0;
    for (int k : {2, 4}) {
        const Cplx al = (k == 2) ? cx.alpha : cx.alpha * cx.alpha_tilde * cx.alpha_tilde;
        const Cplx Uk = (k == 2) ? cx.U2 : cx.U4;
        const Cplx Vk = (k == 2) ? cx.V2 : cx.V4;
        {
            const Matrix A1 = cx.E[k] * cx.E[1] - cx.E[1] * cx.E[k];
            const Matrix A3 = cx.E[k] * cx.E[3] - cx.E[3] * cx.E[k];
            const Matrix lhs =
                A1 * A3 + A3 * A1 - cs * cx.E[k] * cx.E[1] * cx.E[3] * cx.E[k];
            const Matrix rhs = cx.g * al * (1.0 - Uk * Uk * Vk * Vk) * I;
            e = std::max(e, cx.relnorm(lhs - rhs, lhs + rhs));
        }
        {
            const Matrix B1 = cx.F[k] * cx.F[1] - cx.F[1] * cx.F[k];
            const Matrix B3 = cx.F[k] * cx.F[3] - cx.F[3] * cx.F[k];
            const Matrix lhs =
                B1 * B3 + B3 * B1 - cs * cx.F[k] * cx.F[1] * cx.F[3] * cx.F[k];
            const Matrix rhs =
                cx.g / al * (1.0 / (Vk * Vk) - 1.0 / (Uk * Uk)) * I;
            e = std::max(e, cx.relnorm(lhs - rhs, lhs + rhs));
        }
    }
    push("quartic-serre", e);

    e = 0;
    for (int k : {2, 4}) {
        const Cplx Vk = (k == 2) ? cx.V2 : cx.V4;
        const Matrix lhs = cx.K[1] * cx.K[k] * cx.K[k] * cx.K[3];
        e = std::max(e, cx.relnorm(lhs - (1.0 / (Vk * Vk)) * I, lhs));
    }
    push("cartan-central", e);
    return out;
}

}  // namespace

std::vector<VerificationReport> check_algebra_relations(const Kinematics& kin,
                                                        double tolerance) {
    RelationContext cx;
    cx.dim = 4 * kin.M;
    for (int j = 1; j <= 4; ++j) {
        cx.E[j] = generator_action({j, GenKind::E}, kin).entries;
        cx.F[j] = generator_action({j, GenKind::F}, kin).entries;
        cx.K[j] = generator_action({j, GenKind::K}, kin).entries;
    }
    cx.q = kin.params.q;
    cx.g = kin.params.g;
    cx.gt = kin.g_tilde;
    cx.alpha = kin.params.alpha;
    cx.alpha_tilde = kin.params.alpha_tilde;
    cx.U2 = kin.U;
    cx.V2 = kin.V;
    cx.U4 = kin.U_tilde;
    cx.V4 = kin.V_tilde;
    cx.braid2 = kin.U;
    return run_relation_checks(cx, "single module", tolerance);
}

std::vector<VerificationReport> check_coproduct_relations(const Kinematics& kin1,
                                                          const Kinematics& kin2,
                                                          double tolerance) {
    RelationContext cx;
    cx.dim = 16 * kin1.M * kin2.M;
    for (int j = 1; j <= 4; ++j) {
        cx.E[j] = coproduct_action({j, GenKind::E}, kin1, kin2).entries;
        cx.F[j] = coproduct_action({j, GenKind::F}, kin1, kin2).entries;
        cx.K[j] = coproduct_action({j, GenKind::K}, kin1, kin2).entries;
    }
    cx.q = kin1.params.q;
    cx.g = kin1.params.g;
    cx.gt = kin1.g_tilde;
    cx.alpha = kin1.params.alpha;
    cx.alpha_tilde = kin1.params.alpha_tilde;
    cx.U2 = kin1.U * kin2.U;
    cx.V2 = kin1.V * kin2.V;
    cx.U4 = 1.0 / cx.U2;
    cx.V4 = 1.0 / cx.V2;
    cx.braid2 = kin1.U * kin2.U;
    return run_relation_checks(cx, "tensor product", tolerance);
}

}  // namespace qsu22
