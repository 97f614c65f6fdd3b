#include "qsu22/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

// The stacked intertwiner system M_J = Delta(J)^T ox 1 - 1 ox Delta_op(J)
// acts on vec(S) (column-major).  Forming H = sum_J M_J^dag M_J through the
// Kronecker identity keeps the build at O(d^4); the kernel direction comes
// from the lowest eigenpair of H, and its singular value is then refined
// from the actual residual, which stays accurate where the squared
// eigenvalue would drown in round-off.

namespace qsu22 {

namespace {

struct Stacked {
    std::vector<Matrix> delta, delta_op;
    int d = 0;
};

Stacked build_pairs(const Kinematics& k1, const Kinematics& k2,
                    const std::vector<GeneratorId>& gens) {
    Stacked st;
    st.d = 16 * k1.M * k2.M;
    for (const auto& id : gens) {
        st.delta.push_back(coproduct_action(id, k1, k2).entries);
        st.delta_op.push_back(coproduct_action(id, k1, k2, true).entries);
    }
    return st;
}

// H = sum_J [ (conj(A) A^T) ox 1 + 1 ox (B^dag B) - conj(A) ox B - A^T ox B^dag ]
Matrix build_normal_matrix(const Stacked& st) {
    const int d = st.d;
    const int D = d * d;
    Matrix H = Matrix::Zero(D, D);
    for (size_t g = 0; g < st.delta.size(); ++g) {
        const Matrix& A = st.delta[g];
        const Matrix& B = st.delta_op[g];
        const Matrix G1 = A.conjugate() * A.transpose();
        const Matrix G2 = B.adjoint() * B;
        const Matrix Ac = A.conjugate();
        const Matrix At = A.transpose();
        const Matrix Bd = B.adjoint();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                auto blk = H.block(i * d, j * d, d, d);
                if (i == j) blk += G2;
                blk -= Ac(i, j) * B;
                blk -= At(i, j) * Bd;
                for (int k = 0; k < d; ++k) H(i * d + k, j * d + k) += G1(i, j);
            }
    }
    return H;
}

// Lowest `nev` eigenpairs of a Hermitian matrix (ascending).
void lowest_eigenpairs(Matrix& H, int nev, std::vector<double>& vals, Matrix& vecs) {
    const int n = int(H.rows());
    vals.assign(nev, 0.0);
    vecs.resize(n, nev);
    std::vector<double> w(n);
    std::vector<lapack_int> isuppz(2 * std::max(1, nev));
    lapack_int m = 0;
    const lapack_int info = LAPACKE_zheevr(
        LAPACK_COL_MAJOR, 'V', 'I', 'U', n,
        reinterpret_cast<lapack_complex_double*>(H.data()), n, 0.0, 0.0, 1, nev,
        0.0, &m, w.data(), reinterpret_cast<lapack_complex_double*>(vecs.data()), n,
        isuppz.data());
    if (info != 0) throw std::runtime_error("oracle: zheevr failed");
    for (int i = 0; i < nev; ++i) vals[i] = w[i];
}

double largest_eigenvalue(const Matrix& H) {
    // power iteration; H is Hermitian positive semidefinite
    Eigen::VectorXcd v = Eigen::VectorXcd::Random(H.rows());
    v.normalize();
    double lam = 0.0;
    for (int it = 0; it < 60; ++it) {
        Eigen::VectorXcd w = H * v;
        const double nl = w.norm();
        if (nl == 0.0) return 0.0;
        w /= nl;
        if (std::abs(nl - lam) < 1e-10 * nl && it > 4) return nl;
        lam = nl;
        v = w;
    }
    return lam;
}

double stack_residual(const Stacked& st, const Matrix& S) {
    double sum = 0.0;
    for (size_t g = 0; g < st.delta.size(); ++g)
        sum += (S * st.delta[g] - st.delta_op[g] * S).squaredNorm();
    return std::sqrt(sum) / S.norm();
}

struct Spectrum {
    std::vector<double> sigma;  // ascending, sigma[0] refined
    Matrix S;                   // kernel direction reshaped, unnormalized
    double sigma_max = 0.0;
};

Spectrum solve(const Kinematics& k1, const Kinematics& k2, const OracleOptions& opts,
               int nev) {
    const Stacked st = build_pairs(k1, k2, opts.generators);
    Matrix H = build_normal_matrix(st);
    const double lam_max = largest_eigenvalue(H);
    std::vector<double> vals;
    Matrix vecs;
    lowest_eigenpairs(H, nev, vals, vecs);
    Spectrum sp;
    const int d = st.d;
    sp.S = Matrix(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) sp.S(i, j) = vecs(i + j * d, 0);
    // every small singular value is refined through the actual residual of
    // its eigenvector; the squared eigenvalues bottom out at round-off long
    // before the residuals do
    sp.sigma.resize(nev);
    Matrix T(d, d);
    for (int e = 0; e < nev; ++e) {
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) T(i, j) = vecs(i + j * d, e);
        sp.sigma[e] = stack_residual(st, T);
    }
    std::sort(sp.sigma.begin(), sp.sigma.end());
    sp.sigma_max = std::sqrt(std::max(0.0, lam_max));
    return sp;
}

}  // namespace

OracleResult intertwiner_nullspace(const Kinematics& kin1, const Kinematics& kin2,
                                   const OracleOptions& opts) {
    Spectrum sp = solve(kin1, kin2, opts, 2);
    const double cut = opts.gap_threshold * sp.sigma_max;
    if (!(sp.sigma[0] < cut) || !(sp.sigma[1] >= cut))
        throw degeneracy_error("intertwiner_nullspace: kernel dimension != 1", sp.sigma);
    const int vac1 = basis_index({0, 0, 0, kin1.M}, kin1.M);
    const int vac2 = basis_index({0, 0, 0, kin2.M}, kin2.M);
    const int vac = vac1 * 4 * kin2.M + vac2;
    const Cplx norm = sp.S(vac, vac);
    if (std::abs(norm) < 1e-12 * sp.S.cwiseAbs().maxCoeff())
        throw degeneracy_error("intertwiner_nullspace: vanishing vacuum amplitude",
                               sp.sigma);
    OracleResult res;
    res.S.rows = res.S.cols = BasisDesc{{kin1.M, kin2.M}};
    res.S.entries = sp.S / norm;
    res.sigma1 = sp.sigma[0];
    res.sigma2 = sp.sigma[1];
    res.sigma_max = sp.sigma_max;
    return res;
}

std::vector<double> kernel_spectrum(const Kinematics& kin1, const Kinematics& kin2,
                                    const OracleOptions& opts) {
    const int d2 = 16 * kin1.M * kin2.M;
    const int nev = std::min(5, d2 * d2);
    Spectrum sp = solve(kin1, kin2, opts, nev);
    return sp.sigma;
}

}  // namespace qsu22
