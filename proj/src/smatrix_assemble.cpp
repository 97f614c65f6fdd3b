#include <Eigen/QR>

#include "smatrix_internal.hpp"

// Assembly of the full S-matrix from the closed-form blocks.  The
// charge-coefficient systems determine every block whose out-label has a
// subspace-I partner; the remaining su(2)-descendant rows of each sector
// (at most a few per sector) are completed from the invariance relations
// under the bosonic ladder and the raising/lowering charges, which is also
// how the special case M2 = 1 is treated in closed form.

namespace qsu22 {

namespace {

struct Workspace {
    const Kinematics& K1;
    const Kinematics& K2;
    int M1, M2, d1, d2, d;
    Cplx q, z12, D;
    Matrix E1, E1op, E2, E2op, E4, E4op, F2, F2op, F4, F4op;

    Workspace(const Kinematics& k1, const Kinematics& k2)
        : K1(k1), K2(k2), M1(k1.M), M2(k2.M) {
        d1 = 4 * M1;
        d2 = 4 * M2;
        d = d1 * d2;
        q = k1.params.q;
        z12 = k1.z / k2.z;
        D = coeff_D(k1, k2);
        E1 = coproduct_action({1, GenKind::E}, k1, k2).entries;
        E1op = coproduct_action({1, GenKind::E}, k1, k2, true).entries;
        E2 = coproduct_action({2, GenKind::E}, k1, k2).entries;
        E2op = coproduct_action({2, GenKind::E}, k1, k2, true).entries;
        E4 = coproduct_action({4, GenKind::E}, k1, k2).entries;
        E4op = coproduct_action({4, GenKind::E}, k1, k2, true).entries;
        F2 = coproduct_action({2, GenKind::F}, k1, k2).entries;
        F2op = coproduct_action({2, GenKind::F}, k1, k2, true).entries;
        F4 = coproduct_action({4, GenKind::F}, k1, k2).entries;
        F4op = coproduct_action({4, GenKind::F}, k1, k2, true).entries;
    }

    int ti(const BasisState& a, const BasisState& b) const {
        return basis_index(a, M1) * d2 + basis_index(b, M2);
    }
    int ti(const std::pair<BasisState, BasisState>& p) const {
        return ti(p.first, p.second);
    }
    int swapped(const std::pair<BasisState, BasisState>& p) const {
        const BasisState a{p.first.n, p.first.m, p.first.k, p.first.l};
        const BasisState b{p.second.n, p.second.m, p.second.k, p.second.l};
        return ti(a, b);
    }
};

struct SectorState {
    int slot, k1, k2, tidx;
};

std::vector<SectorState> sector_states(const Workspace& w, int K, bool third) {
    std::vector<SectorState> out;
    if (K < 0) return out;
    std::vector<char> seen(w.d, 0);
    const int nslots = third ? 6 : 4;
    for (int k1 = 0; k1 <= w.M1 + 1; ++k1) {
        const int k2 = K - k1;
        if (k2 < -1 || k2 > w.M2 + 1) continue;
        for (int s = 1; s <= nslots; ++s) {
            const StatePair p = third ? subspace_III_state(w.M1, w.M2, s, k1, k2)
                                      : subspace_II_state(w.M1, w.M2, s, k1, k2);
            if (!p) continue;
            const int t = w.ti(*p);
            if (seen[t]) continue;
            seen[t] = 1;
            out.push_back({s, k1, k2, t});
        }
    }
    return out;
}

void solve_edges(Matrix& S, const std::vector<SectorState>& edge,
                 const std::vector<std::pair<Eigen::RowVectorXcd, Cplx>>& eqs,
                 int tin) {
    const int ne = int(edge.size());
    Eigen::MatrixXcd A(eqs.size(), ne);
    Eigen::VectorXcd b(eqs.size());
    for (size_t r = 0; r < eqs.size(); ++r) {
        A.row(r) = eqs[r].first;
        b(r) = eqs[r].second;
    }
    const auto cod = A.completeOrthogonalDecomposition();
    if (cod.rank() < ne)
        throw degenerate_kinematics_error("assemble_S: sector completion is rank-deficient");
    const Eigen::VectorXcd x = cod.solve(b);
    for (int e = 0; e < ne; ++e) S(edge[e].tidx, tin) = x(e);
}

void fill_subspace_I(const Workspace& w, Matrix& S) {
    for (int a = 0; a < w.M1; ++a)
        for (int b = 0; b < w.M2; ++b) {
            const StatePair in = subspace_I_state(w.M1, w.M2, a, b);
            const int K = a + b;
            for (int n = std::max(0, K - w.M2 + 1); n <= std::min(K, w.M1 - 1); ++n) {
                const Cplx x = w.D * block_X(w.M1, w.M2, a, b, n, w.z12, w.q);
                const StatePair out = subspace_I_state(w.M1, w.M2, n, K - n);
                S(w.ti(*out), w.ti(*in)) = x;
                S(w.swapped(*out), w.swapped(*in)) = x;  // Ib by species swap
            }
        }
}

void fill_subspace_II(const Workspace& w, Matrix& S) {
    for (int K = 0; K <= w.M1 + w.M2 - 1; ++K) {
        const auto states = sector_states(w, K, false);
        if (states.empty()) continue;
        const int n_lo = std::max(0, K - w.M2 + 1);
        const int n_hi = std::min(K, w.M1 - 1);
        std::vector<char> covered(w.d, 0);
        for (int n = n_lo; n <= n_hi; ++n)
            for (int s = 1; s <= 4; ++s) {
                const StatePair p = subspace_II_state(w.M1, w.M2, s, n, K - n);
                if (p) covered[w.ti(*p)] = 1;
            }
        for (int k1 = 0; k1 <= w.M1; ++k1) {
            const int k2 = K - k1;
            if (k2 < 0 || k2 > w.M2) continue;
            std::vector<std::pair<int, int>> cols;  // (slot, tensor index)
            for (int s = 1; s <= 4; ++s) {
                const StatePair p = subspace_II_state(w.M1, w.M2, s, k1, k2);
                if (p) cols.push_back({s, w.ti(*p)});
            }
            if (cols.empty()) continue;
            for (int n = n_lo; n <= n_hi; ++n) {
                const Matrix4 Y = block_Y(w.M1, w.M2, k1, k2, n, w.K1, w.K2);
                for (int s = 1; s <= 4; ++s) {
                    const StatePair p = subspace_II_state(w.M1, w.M2, s, n, K - n);
                    if (!p) continue;
                    for (const auto& [si, tin] : cols)
                        S(w.ti(*p), tin) = Y(s - 1, si - 1);
                }
            }
        }
        std::vector<SectorState> edge;
        for (const auto& st : states)
            if (!covered[st.tidx]) edge.push_back(st);
        if (edge.empty()) continue;
        const auto prev = sector_states(w, K - 1, false);
        for (const auto& in : states) {
            std::vector<std::pair<Eigen::RowVectorXcd, Cplx>> eqs;
            for (const auto& b : prev) {
                Eigen::RowVectorXcd coef(edge.size());
                bool any = false;
                for (size_t e = 0; e < edge.size(); ++e) {
                    coef(e) = w.E1op(b.tidx, edge[e].tidx);
                    any = any || (std::abs(coef(e)) > 1e-13);
                }
                if (!any) continue;
                Cplx rhs = 0;
                for (int j = 0; j < w.d; ++j)
                    if (w.E1(j, in.tidx) != Cplx(0)) rhs += S(b.tidx, j) * w.E1(j, in.tidx);
                for (const auto& o : states)
                    if (covered[o.tidx]) rhs -= w.E1op(b.tidx, o.tidx) * S(o.tidx, in.tidx);
                eqs.push_back({coef, rhs});
            }
            solve_edges(S, edge, eqs, in.tidx);
        }
    }
    // IIb by species swap
    for (int K = 0; K <= w.M1 + w.M2 - 1; ++K) {
        const auto states = sector_states(w, K, false);
        for (const auto& in : states) {
            const StatePair pin = subspace_II_state(w.M1, w.M2, in.slot, in.k1, in.k2);
            for (const auto& out : states) {
                const StatePair pout = subspace_II_state(w.M1, w.M2, out.slot, out.k1, out.k2);
                S(w.swapped(*pout), w.swapped(*pin)) = S(out.tidx, in.tidx);
            }
        }
    }
}

void fill_subspace_III(const Workspace& w, Matrix& S) {
    const YTable ytab = [&w, &S](int k1, int k2, int n) -> Matrix4 {
        // Y entries read back from the assembled matrix, so the shifted
        // lookups also see the completed su(2)-descendant rows.
        Matrix4 Y = Matrix4::Zero();
        const int K = k1 + k2;
        if (n < 0 || n > K) return Y;
        for (int i = 1; i <= 4; ++i) {
            const StatePair po = subspace_II_state(w.M1, w.M2, i, n, K - n);
            if (!po) continue;
            for (int j = 1; j <= 4; ++j) {
                const StatePair pi = subspace_II_state(w.M1, w.M2, j, k1, k2);
                if (!pi) continue;
                Y(i - 1, j - 1) = S(w.ti(*po), w.ti(*pi));
            }
        }
        return Y;
    };
    const auto bras_exist = [&w](int n, int K) {
        return subspace_II_state(w.M1, w.M2, 1, n, K - n) &&
               subspace_II_state(w.M1, w.M2, 2, n, K - n) &&
               subspace_II_state(w.M1, w.M2, 3, n, K - n) &&
               subspace_II_state(w.M1, w.M2, 1, n - 1, K - n) &&
               subspace_II_state(w.M1, w.M2, 2, n, K - n - 1) &&
               subspace_II_state(w.M1, w.M2, 3, n - 1, K - n);
    };
    for (int K = 0; K <= w.M1 + w.M2; ++K) {
        const auto states = sector_states(w, K, true);
        if (states.empty()) continue;
        std::vector<char> covered(w.d, 0);
        if (K == 0) {
            const int vac = w.ti(BasisState{0, 0, 0, w.M1}, BasisState{0, 0, 0, w.M2});
            S(vac, vac) = 1.0;  // scattering normalization
            covered[vac] = 1;
        }
        for (int n = 0; n <= K; ++n) {
            if (!bras_exist(n, K)) continue;
            for (int k1 = 0; k1 <= w.M1; ++k1) {
                const int k2 = K - k1;
                if (k2 < 0 || k2 > w.M2) continue;
                std::vector<std::pair<int, int>> cols;
                for (int s = 1; s <= 6; ++s) {
                    const StatePair p = subspace_III_state(w.M1, w.M2, s, k1, k2);
                    if (p) cols.push_back({s, w.ti(*p)});
                }
                if (cols.empty()) continue;
                const Matrix6 Z = block_Z(w.M1, w.M2, k1, k2, n, w.K1, w.K2, ytab);
                for (int s = 1; s <= 6; ++s) {
                    const StatePair p = subspace_III_state(w.M1, w.M2, s, n, K - n);
                    if (!p) continue;
                    covered[w.ti(*p)] = 1;
                    for (const auto& [si, tin] : cols)
                        S(w.ti(*p), tin) = Z(s - 1, si - 1);
                }
            }
        }
        std::vector<SectorState> edge;
        for (const auto& st : states)
            if (!covered[st.tidx]) edge.push_back(st);
        if (edge.empty()) continue;
        const auto prev = sector_states(w, K - 1, true);
        const std::array<const Matrix*, 5> del = {&w.E2, &w.E4, &w.F2, &w.F4, &w.E1};
        const std::array<const Matrix*, 5> dop = {&w.E2op, &w.E4op, &w.F2op, &w.F4op, &w.E1op};
        for (const auto& in : states) {
            std::vector<std::pair<Eigen::RowVectorXcd, Cplx>> eqs;
            for (int gi = 0; gi < 5; ++gi) {
                const Matrix& Dc = *del[gi];
                const Matrix& Dop = *dop[gi];
                const bool ladder = (gi == 4);
                std::vector<int> bras;
                if (ladder) {
                    for (const auto& b : prev) bras.push_back(b.tidx);
                } else {
                    bras.resize(w.d);
                    for (int b = 0; b < w.d; ++b) bras[b] = b;
                }
                for (int b : bras) {
                    Eigen::RowVectorXcd coef(edge.size());
                    bool any = false;
                    for (size_t e = 0; e < edge.size(); ++e) {
                        coef(e) = Dop(b, edge[e].tidx);
                        any = any || (std::abs(coef(e)) > 1e-13);
                    }
                    if (!any) continue;
                    Cplx rhs = 0;
                    for (int j = 0; j < w.d; ++j)
                        if (Dc(j, in.tidx) != Cplx(0)) rhs += S(b, j) * Dc(j, in.tidx);
                    for (const auto& o : states)
                        if (covered[o.tidx]) rhs -= Dop(b, o.tidx) * S(o.tidx, in.tidx);
                    eqs.push_back({coef, rhs});
                }
            }
            solve_edges(S, edge, eqs, in.tidx);
        }
    }
}

}  // namespace

OperatorMatrix assemble_S(const Kinematics& kin1, const Kinematics& kin2) {
    Workspace w(kin1, kin2);
    OperatorMatrix op;
    op.rows = op.cols = BasisDesc{{w.M1, w.M2}};
    Matrix S = Matrix::Zero(w.d, w.d);
    fill_subspace_I(w, S);
    fill_subspace_II(w, S);
    fill_subspace_III(w, S);
    op.entries = std::move(S);
    return op;
}

// ---------------------------------------------------------------------------
// Fundamental S-matrix: the explicit 16x16 entries
// ---------------------------------------------------------------------------

namespace {

// The explicit 2x2 mixed-sector coefficients of the fundamental case,
// in the x-parametrized form.
Eigen::Matrix2cd fundamental_Y2(const Kinematics& K1, const Kinematics& K2) {
    const Cplx sq = K1.sqrt_q;
    const Cplx x1p = K1.xplus, x1m = K1.xminus, x2p = K2.xplus, x2m = K2.xminus;
    Eigen::Matrix2cd Y;
    Y(0, 0) = sq * K2.U * K2.V * (x2m - x1m) / (x2p - x1m);
    Y(0, 1) = (K1.gamma / K2.gamma) * (K2.U * K2.V / (K1.U * K1.V)) * (x2p - x2m) / (x2p - x1m);
    Y(1, 0) = (K2.gamma / K1.gamma) * (x1p - x1m) / (x2p - x1m);
    Y(1, 1) = (1.0 / (sq * K1.U * K1.V)) * (x2p - x1p) / (x2p - x1m);
    return Y;
}

// 2x2 sub-block of the subspace-III charge matrix: one row, two columns,
// stacked with its affine partner.
Eigen::Matrix2cd g_rows2(const Kinematics& K1, const Kinematics& K2,
                         int row, int c1, int c2, int k1, int k2, int Ksec, bool op) {
    const auto plain = sIII::G_matrix(K1, K2, k1, k2, Ksec, op, false);
    const auto tilde = sIII::G_matrix(K1, K2, k1, k2, Ksec, op, true);
    Eigen::Matrix2cd out;
    out(0, 0) = plain(row - 1, c1 - 1);
    out(0, 1) = plain(row - 1, c2 - 1);
    out(1, 0) = tilde(row - 1, c1 - 1);
    out(1, 1) = tilde(row - 1, c2 - 1);
    return out;
}

}  // namespace

OperatorMatrix fundamental_S(const Kinematics& kin1, const Kinematics& kin2) {
    if (kin1.M != 1 || kin2.M != 1)
        throw std::invalid_argument("fundamental_S: requires M1 = M2 = 1");
    const Cplx q = kin1.params.q;
    const Cplx D = coeff_D(kin1, kin2);
    const BasisState phi1{0, 0, 1, 0}, phi2{0, 0, 0, 1}, psi1{1, 0, 0, 0}, psi2{0, 1, 0, 0};
    const auto ti = [](const BasisState& a, const BasisState& b) {
        return basis_index(a, 1) * 4 + basis_index(b, 1);
    };
    OperatorMatrix op;
    op.rows = op.cols = BasisDesc{{1, 1}};
    Matrix S = Matrix::Zero(16, 16);

    S(ti(phi1, phi1), ti(phi1, phi1)) = 1.0;
    S(ti(phi2, phi2), ti(phi2, phi2)) = 1.0;  // scattering normalization
    S(ti(psi1, psi1), ti(psi1, psi1)) = D;
    S(ti(psi2, psi2), ti(psi2, psi2)) = D;

    const Eigen::Matrix2cd Y = fundamental_Y2(kin1, kin2);
    for (const BasisState& ps : {psi1, psi2})
        for (const BasisState& ph : {phi1, phi2}) {
            S(ti(ps, ph), ti(ps, ph)) = Y(0, 0);
            S(ti(ph, ps), ti(ps, ph)) = Y(1, 0);
            S(ti(ps, ph), ti(ph, ps)) = Y(0, 1);
            S(ti(ph, ps), ti(ph, ps)) = Y(1, 1);
        }

    // Mixed-flavor sector: four reduced 2x2 relations between the charge
    // matrices, one per (out-label, in-label) pair.
    const auto solve2 = [](const Eigen::Matrix2cd& L, const Eigen::Matrix2cd& R,
                           Cplx y) -> Eigen::Matrix2cd {
        return L.fullPivLu().solve(Eigen::Matrix2cd(y * R));
    };
    const Eigen::Matrix2cd Gop_10 = g_rows2(kin1, kin2, 2, 1, 5, 1, 0, 1, true);
    const Eigen::Matrix2cd G_10 = g_rows2(kin1, kin2, 2, 1, 5, 1, 0, 1, false);
    const Eigen::Matrix2cd Gop_01 = g_rows2(kin1, kin2, 1, 1, 6, 0, 1, 1, true);
    const Eigen::Matrix2cd G_01 = g_rows2(kin1, kin2, 1, 1, 6, 0, 1, 1, false);
    const Eigen::Matrix2cd Z_10_1 = solve2(Gop_10, G_10, Y(1, 1));
    const Eigen::Matrix2cd Z_01_1 = solve2(Gop_10, G_01, Y(1, 0));
    const Eigen::Matrix2cd Z_10_0 = solve2(Gop_01, G_10, Y(0, 1));
    const Eigen::Matrix2cd Z_01_0 = solve2(Gop_01, G_01, Y(0, 0));

    // the explicit closed form of the first block is asserted
    {
        const Cplx x1p = kin1.xplus, x1m = kin1.xminus;
        const Cplx x2p = kin2.xplus, x2m = kin2.xminus;
        const Cplx g1 = kin1.gamma, g2 = kin2.gamma, al = kin1.params.alpha;
        const Cplx sq = kin1.sqrt_q;
        Eigen::Matrix2cd Zref;
        Zref(0, 0) = (1.0 - x2m * x1p) * (x1p - x2p) /
                     ((1.0 - x1m * x2m) * (x1m - x2p)) * x1m / (q * x1p);
        Zref(0, 1) = al * (x1m - x1p) * (x2m - x2p) * (x1p - x2p) /
                     (sq * kin1.U * kin1.V * g1 * g2 * (x1m * x2m - 1.0) * (x1m - x2p));
        Zref(1, 0) = g1 * g2 * (x1p - x2p) /
                     (kin2.U * kin2.V * al * (1.0 - x1m * x2m) * (x2p - x1m)) *
                     x1m / (q * sq * x1p);
        Zref(1, 1) = (1.0 - x1m * x2p) * (x1p - x2p) /
                     ((1.0 - x1m * x2m) * (x1m - x2p)) *
                     (kin2.U * kin2.V / (kin1.U * kin1.V)) * x2m / (q * x2p);
        if ((Z_10_1 - Zref).cwiseAbs().maxCoeff() > 1e-10)
            throw std::runtime_error(
                "fundamental_S: explicit 2x2 form disagrees with the reduced relation");
    }

    S(ti(phi1, phi2), ti(phi1, phi2)) = Z_10_1(0, 0);
    S(ti(phi1, phi2), ti(psi1, psi2)) = Z_10_1(0, 1);
    S(ti(psi1, psi2), ti(phi1, phi2)) = Z_10_1(1, 0);
    S(ti(psi1, psi2), ti(psi1, psi2)) = Z_10_1(1, 1);
    S(ti(phi2, phi1), ti(phi1, phi2)) = Z_10_0(0, 0);
    S(ti(phi2, phi1), ti(psi1, psi2)) = Z_10_0(0, 1);
    S(ti(psi2, psi1), ti(phi1, phi2)) = Z_10_0(1, 0);
    S(ti(psi2, psi1), ti(psi1, psi2)) = Z_10_0(1, 1);
    S(ti(phi1, phi2), ti(phi2, phi1)) = Z_01_1(0, 0);
    S(ti(phi1, phi2), ti(psi2, psi1)) = Z_01_1(0, 1);
    S(ti(psi1, psi2), ti(phi2, phi1)) = Z_01_1(1, 0);
    S(ti(psi1, psi2), ti(psi2, psi1)) = Z_01_1(1, 1);
    S(ti(phi2, phi1), ti(phi2, phi1)) = Z_01_0(0, 0);
    S(ti(phi2, phi1), ti(psi2, psi1)) = Z_01_0(0, 1);
    S(ti(psi2, psi1), ti(phi2, phi1)) = Z_01_0(1, 0);
    S(ti(psi2, psi1), ti(psi2, psi1)) = Z_01_0(1, 1);

    op.entries = std::move(S);
    return op;
}

// ---------------------------------------------------------------------------
// Bound state x fundamental
// ---------------------------------------------------------------------------

namespace {

// Closed-form subspace-II coefficients for M2 = 1, validated against the
// general path below.
struct SQ1Y {
    Matrix4 same;              // (k,0) -> out (k,0):     [j][i]
    std::array<Cplx, 4> down;  // (k,0) -> out (k-1,1)_1: row entries
    std::array<Cplx, 4> up;    // (k-1,1)_1 -> out (k,0): column entries
    Cplx diag;                 // (k-1,1)_1 -> out (k-1,1)_1
};

SQ1Y sq1_y_closed(const Kinematics& K1, const Kinematics& K2, int k) {
    const Cplx q = K1.params.q;
    const int Q = K1.M;
    const Cplx x1p = K1.xplus, x1m = K1.xminus, x2p = K2.xplus, x2m = K2.xminus;
    const Cplx U1V1 = K1.U * K1.V, U2V2 = K2.U * K2.V;
    const Cplx g1 = K1.gamma, g2 = K2.gamma, al = K1.params.alpha;
    const Cplx z12 = K1.z / K2.z;
    const Cplx sq = K1.sqrt_q;
    const Cplx sQ = std::sqrt(qnumber(Q, q));
    const Cplx r = (x1m - x2m) / (x1m - x2p);
    SQ1Y y;
    y.same.setZero();
    y.same(0, 0) = std::pow(sq, 1 + 2 * k) * U2V2 * r *
                   (z12 - std::pow(q, Q - 2 * k - 1)) / (z12 - std::pow(q, Q - 1));
    y.same(1, 1) = (x1p - x2p) / (x1m - x2p) / (std::pow(sq, Q) * U1V1);
    y.same(0, 1) = std::pow(sq, 1 - Q) * qnumber(Q - k, q) / sQ *
                   (x2m - x2p) / (x1m - x2p) * (U2V2 / U1V1) * (g1 / g2);
    y.same(1, 0) = (x1m - x1p) / (x1m - x2p) * (g2 / g1) / sQ;
    y.same(0, 3) = std::pow(sq, 1 - Q) * al / sQ * (U2V2 / U1V1) *
                   (x1m - x1p) * (x2m - x2p) * (x2m - x1p) /
                   ((x1m - x2p) * (x1m * x2m - 1.0) * g1 * g2);
    y.same(3, 0) = std::pow(q, -Q) * qnumber(k, q) / sQ * (x1p - x2m) /
                   ((x1m - x2p) * (1.0 - x1m * x2m)) * (x1m / x1p) * (g1 * g2 / al);
    // repaired: the numerator reads (x1+ - x2-), not (x1+ - x1-)
    y.same(3, 3) = (x1p - x2m) / (x1m - x2p) * (1.0 - x1m * x2p) /
                   (1.0 - x1m * x2m) / (std::pow(sq, Q) * U1V1);

    y.down = {std::pow(sq, 1 + 2 * Q) * U2V2 * r * (1.0 - std::pow(q, -2 * k)) /
                  (std::pow(q, Q) - q * z12),
              std::pow(sq, 1 + Q - 2 * k) * qnumber(k, q) / sQ * (x2m - x2p) /
                  (x1m - x2p) * (U2V2 / U1V1) * (g1 / g2),
              Cplx(0),
              -std::pow(q, -k) * y.same(0, 3)};

    // repaired: exponent 2k (not 2(k+1)) and the factor [Q-k] / q^{Q-k}
    y.up = {std::pow(sq, 1 - 2 * Q) * U2V2 * r *
                (std::pow(q, 2 * k) - std::pow(q, 2 * Q)) * z12 / (z12 - std::pow(q, Q - 1)),
            std::pow(q, k - Q) * (x1m - x1p) / (x1m - x2p) * (g2 / g1) / sQ,
            Cplx(0),
            qnumber(Q - k, q) / (std::pow(q, Q - k) * sQ) * (x2m - x1p) /
                ((x1m - x2p) * (1.0 - x1m * x2m)) * (x1m / x1p) * (g1 * g2 / al)};

    y.diag = std::pow(sq, 1 - 2 * k) * U2V2 * r *
             (std::pow(q, 2 * k) - std::pow(q, 1 + Q) * z12) / (std::pow(q, Q) - q * z12);
    return y;
}

}  // namespace

SBlocks sq1_blocks(const Kinematics& kin1, const Kinematics& kin2,
                   bool verify_against_general) {
    if (kin2.M != 1) throw std::invalid_argument("sq1_blocks: requires M2 = 1");
    const int Q = kin1.M, M1 = Q, M2 = 1;
    const Cplx q = kin1.params.q;
    const int d = 16 * Q;
    SBlocks blocks;
    blocks.D = coeff_D(kin1, kin2);
    const Cplx z12 = kin1.z / kin2.z;
    for (int k = 0; k < Q; ++k)
        blocks.X[{k, 0, k}] = blocks.D * block_X(Q, 1, k, 0, k, z12, q);

    const auto ti = [&](const StatePair& p) {
        return basis_index(p->first, M1) * 4 + basis_index(p->second, M2);
    };
    const auto store_y = [&](int k1v, int k2v, int n, int j, int i, Cplx v) {
        // keep only entries between existing states
        if (!subspace_II_state(M1, M2, i, k1v, k2v)) return;
        if (!subspace_II_state(M1, M2, j, n, k1v + k2v - n)) return;
        auto& Y = blocks.Y.try_emplace({k1v, k2v, n}, Matrix4::Zero()).first->second;
        Y(j - 1, i - 1) = v;
    };
    for (int k = 0; k <= Q - 1; ++k) {
        const SQ1Y y = sq1_y_closed(kin1, kin2, k);
        for (int j = 1; j <= 4; ++j)
            for (int i = 1; i <= 4; ++i) store_y(k, 0, k, j, i, y.same(j - 1, i - 1));
        if (k == 0) continue;  // the shifted groups need k >= 1
        for (int i = 1; i <= 4; ++i) store_y(k, 0, k - 1, 1, i, y.down[i - 1]);
        for (int j = 1; j <= 4; ++j) store_y(k - 1, 1, k, j, 1, y.up[j - 1]);
        store_y(k - 1, 1, k - 1, 1, 1, y.diag);
    }

    // S applied to one subspace-II in-state, expanded on the tensor basis
    const auto ycol = [&](int slot, int k1v, int k2v) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        for (const auto& [key, Y] : blocks.Y) {
            if (key[0] != k1v || key[1] != k2v) continue;
            for (int j = 1; j <= 4; ++j) {
                const StatePair p = subspace_II_state(M1, M2, j, key[2], k1v + k2v - key[2]);
                if (p && Y(j - 1, slot - 1) != Cplx(0)) v(ti(p)) += Y(j - 1, slot - 1);
            }
        }
        return v;
    };

    // Top sector of subspace II (K = Q): transported with the bosonic ladder.
    const Matrix F1op = coproduct_action({1, GenKind::F}, kin1, kin2, true).entries;
    const Matrix F1c = coproduct_action({1, GenKind::F}, kin1, kin2).entries;
    {
        struct TopIn {
            int slot, k1v, k2v;
        };
        const std::vector<TopIn> tops = {{2, Q, 0}, {1, Q - 1, 1}};
        std::vector<std::pair<TopIn, int>> unknowns;
        for (const auto& t : tops) {
            const StatePair p = subspace_II_state(M1, M2, t.slot, t.k1v, t.k2v);
            if (p) unknowns.push_back({t, ti(p)});
        }
        // previous-sector in-states with closed-form columns
        std::vector<std::pair<int, Eigen::VectorXcd>> prev;  // (tensor idx, S column)
        for (int k1v = 0; k1v <= Q; ++k1v) {
            const int k2v = Q - 1 - k1v;
            if (k2v < 0 || k2v > 1) continue;
            for (int s = 1; s <= 4; ++s) {
                const StatePair p = subspace_II_state(M1, M2, s, k1v, k2v);
                if (!p) continue;
                bool have = false;
                for (const auto& [key, Y] : blocks.Y)
                    if (key[0] == k1v && key[1] == k2v) { have = true; break; }
                if (have) prev.push_back({ti(p), ycol(s, k1v, k2v)});
            }
        }
        for (const auto& [t, tidx] : unknowns) {
            // expand |top> = sum c_i DF1 |prev_i>
            Eigen::MatrixXcd T(unknowns.size(), prev.size());
            for (size_t c = 0; c < prev.size(); ++c)
                for (size_t r = 0; r < unknowns.size(); ++r)
                    T(r, c) = F1c(unknowns[r].second, prev[c].first);
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(unknowns.size());
            for (size_t r = 0; r < unknowns.size(); ++r)
                if (unknowns[r].second == tidx) e(r) = 1.0;
            const Eigen::VectorXcd c = T.completeOrthogonalDecomposition().solve(e);
            // check the expansion is exact (the ladder spans the top sector)
            if ((T * c - e).norm() > 1e-9)
                throw degenerate_kinematics_error("sq1_blocks: ladder transport failed");
            Eigen::VectorXcd Scol = Eigen::VectorXcd::Zero(d);
            for (size_t i = 0; i < prev.size(); ++i)
                if (c(i) != Cplx(0)) Scol += c(i) * (F1op * prev[i].second);
            // store the projected Y entries of the top column
            for (int n = 0; n <= Q; ++n)
                for (int j = 1; j <= 4; ++j) {
                    const StatePair p = subspace_II_state(M1, M2, j, n, Q - n);
                    if (!p) continue;
                    const Cplx val = Scol(ti(p));
                    if (val != Cplx(0)) store_y(t.k1v, t.k2v, n, j, t.slot, val);
                }
        }
    }

    // Subspace III columns through the transport relations.
    const Matrix F2op = coproduct_action({2, GenKind::F}, kin1, kin2, true).entries;
    const Matrix F4op = coproduct_action({4, GenKind::F}, kin1, kin2, true).entries;
    const Matrix E1op = coproduct_action({1, GenKind::E}, kin1, kin2, true).entries;
    const auto project_z_impl = [&](const Eigen::VectorXcd& v, int in_slot, int in_k1,
                                    int in_k2) {
        for (int n = 0; n <= in_k1 + in_k2; ++n)
            for (int j = 1; j <= 6; ++j) {
                const StatePair p = subspace_III_state(M1, M2, j, n, in_k1 + in_k2 - n);
                if (!p) continue;
                const Cplx val = v(ti(p));
                if (val == Cplx(0)) continue;
                auto& Z = blocks.Z.try_emplace({in_k1, in_k2, n}, Matrix6::Zero())
                              .first->second;
                Z(j - 1, in_slot - 1) = val;
            }
    };

    const auto& L1 = kin1.labels;
    const auto& A1 = kin1.affine_labels;
    const auto& L2 = kin2.labels;
    const auto& A2 = kin2.affine_labels;
    const Cplx den1 =
        A1.c * L2.d * kin1.U_tilde * kin2.V - L1.c * A2.d * kin1.U * kin2.V_tilde;
    const Cplx den3 =
        A1.d * L2.d * kin1.U_tilde * kin2.V - A2.d * L1.d * kin1.U * kin2.V_tilde;
    const Cplx den5 =
        L1.c * A2.d * kin1.U * kin2.V_tilde - A1.c * L2.d * kin1.U_tilde * kin2.V;
    for (int k = 1; k <= Q; ++k) {
        const Eigen::VectorXcd Sy2 = ycol(2, k, 0);
        if (subspace_III_state(M1, M2, 1, k, 0)) {
            const Eigen::VectorXcd Sz =
                (A1.c * kin2.V * (F2op * Sy2) - L1.c * kin2.V_tilde * (F4op * Sy2)) / den1;
            project_z_impl(Sz, 1, k, 0);
        }
        if (subspace_III_state(M1, M2, 3, k, 0)) {
            const Eigen::VectorXcd Sy4 = ycol(4, k, 0);
            const Eigen::VectorXcd Sz =
                (A1.d * kin2.V * (F2op * Sy4) - L1.d * kin2.V_tilde * (F4op * Sy4)) / den3;
            project_z_impl(Sz, 3, k, 0);
        }
        if (subspace_III_state(M1, M2, 5, k, 0)) {
            const Eigen::VectorXcd Sz =
                kin1.sqrt_q / qnumber(k, q) *
                (A2.d * kin1.U * (F2op * Sy2) - L2.d * kin1.U_tilde * (F4op * Sy2)) / den5;
            project_z_impl(Sz, 5, k, 0);
        }
    }
    const auto zcol = [&](int slot, int k1v, int k2v) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        for (const auto& [key, Z] : blocks.Z) {
            if (key[0] != k1v || key[1] != k2v) continue;
            for (int j = 1; j <= 6; ++j) {
                const StatePair p = subspace_III_state(M1, M2, j, key[2], k1v + k2v - key[2]);
                if (p && Z(j - 1, slot - 1) != Cplx(0)) v(ti(p)) += Z(j - 1, slot - 1);
            }
        }
        return v;
    };
    for (int k = 1; k <= Q; ++k) {
        // the composite F1 E1 identities relate the (k-1,1) columns to (k,0)
        if (subspace_III_state(M1, M2, 1, k - 1, 1)) {
            const Eigen::VectorXcd Sz1 = zcol(1, k, 0);
            const Eigen::VectorXcd Sz =
                (F1op * (E1op * Sz1) - q * qnumber(k, q) * qnumber(Q - k + 1, q) * Sz1) /
                qnumber(k, q);
            project_z_impl(Sz, 1, k - 1, 1);
        }
        if (k >= 2 && subspace_III_state(M1, M2, 3, k - 1, 1)) {
            const Eigen::VectorXcd Sz3 = zcol(3, k, 0);
            const Eigen::VectorXcd Sz =
                (F1op * (E1op * Sz3) - q * qnumber(k - 1, q) * qnumber(Q - k, q) * Sz3) /
                qnumber(k - 1, q);
            project_z_impl(Sz, 3, k - 1, 1);
        }
        // the exchange relation for the remaining column
        const StatePair z6 = subspace_III_state(M1, M2, 6, k - 1, 1);
        const StatePair z5 = subspace_III_state(M1, M2, 5, k, 0);
        if (z6 && z5) {
            Eigen::VectorXcd Sz = -q * zcol(5, k, 0);
            Sz(ti(z5)) += blocks.D;
            Sz(ti(z6)) += q * blocks.D;
            project_z_impl(Sz, 6, k - 1, 1);
        }
    }
    // the ladder partner of the top-sector slot-3 column has no slot-3 source;
    // transported from the sector below instead
    if (Q >= 2 && subspace_III_state(M1, M2, 3, Q - 1, 1)) {
        const int target = ti(subspace_III_state(M1, M2, 3, Q - 1, 1));
        std::vector<std::pair<int, Eigen::VectorXcd>> prev;
        for (const auto& [slot, kk1, kk2] :
             std::vector<std::array<int, 3>>{{1, Q - 1, 0}, {3, Q - 1, 0}, {5, Q - 1, 0},
                                             {1, Q - 2, 1}, {3, Q - 2, 1}, {6, Q - 2, 1}}) {
            const StatePair p = subspace_III_state(M1, M2, slot, kk1, kk2);
            if (p) prev.push_back({ti(p), zcol(slot, kk1, kk2)});
        }
        std::vector<int> tops;
        for (const auto& [slot, kk1, kk2] :
             std::vector<std::array<int, 3>>{{1, Q, 0}, {5, Q, 0}, {1, Q - 1, 1},
                                             {3, Q - 1, 1}, {6, Q - 1, 1}}) {
            const StatePair p = subspace_III_state(M1, M2, slot, kk1, kk2);
            if (p) tops.push_back(ti(p));
        }
        Eigen::MatrixXcd T(tops.size(), prev.size());
        for (size_t c = 0; c < prev.size(); ++c)
            for (size_t r = 0; r < tops.size(); ++r) T(r, c) = F1c(tops[r], prev[c].first);
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(tops.size());
        for (size_t r = 0; r < tops.size(); ++r)
            if (tops[r] == target) e(r) = 1.0;
        const Eigen::VectorXcd c = T.completeOrthogonalDecomposition().solve(e);
        if ((T * c - e).norm() > 1e-9)
            throw degenerate_kinematics_error("sq1_blocks: slot-3 ladder transport failed");
        Eigen::VectorXcd Scol = Eigen::VectorXcd::Zero(d);
        for (size_t i = 0; i < prev.size(); ++i)
            if (c(i) != Cplx(0)) Scol += c(i) * (F1op * prev[i].second);
        project_z_impl(Scol, 3, Q - 1, 1);
    }

    if (verify_against_general) {
        const OperatorMatrix S = assemble_S(kin1, kin2);
        double worst = 0;
        for (const auto& [key, Y] : blocks.Y)
            for (int j = 1; j <= 4; ++j)
                for (int i = 1; i <= 4; ++i) {
                    const StatePair po =
                        subspace_II_state(M1, M2, j, key[2], key[0] + key[1] - key[2]);
                    const StatePair pi = subspace_II_state(M1, M2, i, key[0], key[1]);
                    if (!po || !pi) continue;
                    worst = std::max(worst,
                                     std::abs(Y(j - 1, i - 1) - S.entries(ti(po), ti(pi))));
                }
        for (const auto& [key, Z] : blocks.Z)
            for (int j = 1; j <= 6; ++j)
                for (int i = 1; i <= 6; ++i) {
                    const StatePair po =
                        subspace_III_state(M1, M2, j, key[2], key[0] + key[1] - key[2]);
                    const StatePair pi = subspace_III_state(M1, M2, i, key[0], key[1]);
                    if (!po || !pi) continue;
                    worst = std::max(worst,
                                     std::abs(Z(j - 1, i - 1) - S.entries(ti(po), ti(pi))));
                }
        if (worst > 1e-8)
            throw std::runtime_error("sq1_blocks: closed forms disagree with the general path");
    }
    return blocks;
}

}  // namespace qsu22
