#include "qsu22/verify.hpp"

#include <cmath>
#include <sstream>

namespace qsu22 {

namespace {

std::string point_string(const Kinematics& k) {
    std::ostringstream os;
    os.precision(17);
    os << "M=" << k.M << " q=(" << k.params.q.real() << "," << k.params.q.imag()
       << ") g=" << k.params.g << " x+=(" << k.xplus.real() << "," << k.xplus.imag()
       << ") x-=(" << k.xminus.real() << "," << k.xminus.imag() << ") gamma=("
       << k.gamma.real() << "," << k.gamma.imag() << ")";
    return os.str();
}

}  // namespace

VerificationReport check_invariance(const OperatorMatrix& S, const Kinematics& kin1,
                                    const Kinematics& kin2, double tolerance) {
    double rmax = 0.0, rfro = 0.0;
    const double scale = std::max(1.0, S.entries.cwiseAbs().maxCoeff());
    for (int node = 1; node <= 4; ++node)
        for (GenKind kind : {GenKind::E, GenKind::F, GenKind::K, GenKind::H}) {
            const Matrix D = coproduct_action({node, kind}, kin1, kin2).entries;
            const Matrix Dop = coproduct_action({node, kind}, kin1, kin2, true).entries;
            const Matrix R = S.entries * D - Dop * S.entries;
            const double dscale = std::max(1.0, D.cwiseAbs().maxCoeff());
            rmax = std::max(rmax, R.cwiseAbs().maxCoeff() / (scale * dscale));
            rfro = std::max(rfro, R.norm() / (scale * dscale));
        }
    return VerificationReport::make("invariance", point_string(kin1) + " | " + point_string(kin2),
                                    rmax, rfro, tolerance);
}

VerificationReport check_ybe_subspaceI(int M1, int M2, int M3, Cplx z1, Cplx z2,
                                       Cplx z3, Cplx q, double tolerance) {
    const auto X = [&](int Ma, int Mb, int a, int b, int n, Cplx za, Cplx zb) {
        return block_X(Ma, Mb, a, b, n, za / zb, q);
    };
    double rmax = 0.0, rfro = 0.0;
    for (int k1 = 0; k1 < M1; ++k1)
        for (int k2 = 0; k2 < M2; ++k2)
            for (int k3 = 0; k3 < M3; ++k3) {
                const int tot = k1 + k2 + k3;
                for (int m1 = 0; m1 < M1; ++m1)
                    for (int m2 = 0; m2 < M2; ++m2) {
                        const int m3 = tot - m1 - m2;
                        if (m3 < 0 || m3 > M3 - 1) continue;
                        Cplx lhs = 0.0;
                        for (int n = 0; n <= k1 + k2; ++n)
                            lhs += X(M1, M2, k1, k2, n, z1, z2) *
                                   X(M1, M3, n, k3, m2, z1, z3) *
                                   X(M2, M3, k1 + k2 - n, k3 + n - m2, m1 - m2, z2, z3);
                        Cplx rhs = 0.0;
                        for (int n = 0; n <= k2 + k3; ++n)
                            rhs += X(M1, M2, m1 - n, n, m2, z1, z2) *
                                   X(M1, M3, k1, k2 + k3 - n, m1 - n, z1, z3) *
                                   X(M2, M3, k2, k3, n, z2, z3);
                        const double r =
                            std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
                        rmax = std::max(rmax, r);
                        rfro += r * r;
                    }
            }
    std::ostringstream pt;
    pt.precision(17);
    pt << "M=(" << M1 << "," << M2 << "," << M3 << ") z1=(" << z1.real() << ","
       << z1.imag() << ") z2=(" << z2.real() << "," << z2.imag() << ") z3=("
       << z3.real() << "," << z3.imag() << ") q=(" << q.real() << "," << q.imag() << ")";
    return VerificationReport::make("ybe-subspace-I", pt.str(), rmax, std::sqrt(rfro),
                                    tolerance);
}

VerificationReport check_ybe_full(const Kinematics& kin1, const Kinematics& kin2,
                                  const Kinematics& kin3, double tolerance,
                                  bool corrupt) {
    const int d1 = 4 * kin1.M, d2 = 4 * kin2.M, d3 = 4 * kin3.M;
    Matrix S12m = assemble_S(kin1, kin2).entries;
    if (corrupt) S12m.transposeInPlace();  // negative control hook
    const Matrix S13m = assemble_S(kin1, kin3).entries;
    const Matrix S23m = assemble_S(kin2, kin3).entries;
    const auto kron = [](const Matrix& A, const Matrix& B) {
        Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
        for (int i = 0; i < A.rows(); ++i)
            for (int j = 0; j < A.cols(); ++j)
                out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        return out;
    };
    const Matrix I1 = Matrix::Identity(d1, d1);
    const Matrix I2 = Matrix::Identity(d2, d2);
    const Matrix I3 = Matrix::Identity(d3, d3);
    const Matrix S12 = kron(S12m, I3);
    const Matrix S23 = kron(I1, S23m);
    // lift the outer pair through the graded permutation of the first two slots
    const Matrix P12 = graded_permutation(kin1.M, kin2.M);
    const Matrix P21 = graded_permutation(kin2.M, kin1.M);
    const Matrix S13 = kron(P21, I3) * kron(I2, S13m) * kron(P12, I3);
    const Matrix L = S12 * S13 * S23;
    const Matrix R = S23 * S13 * S12;
    const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
    const double rmax = (L - R).cwiseAbs().maxCoeff() / scale;
    const double rfro = (L - R).norm() / std::max(1.0, L.norm());
    return VerificationReport::make(
        "ybe-full",
        point_string(kin1) + " | " + point_string(kin2) + " | " + point_string(kin3),
        rmax, rfro, tolerance);
}

RationalPoint rational_point(Cplx x1, Cplx x2, double g, int M1, int M2) {
    const auto partner = [&](Cplx x, int M) {
        const Cplx rhs = x + 1.0 / x - Cplx(0, 1) * double(M) / g;
        const Cplx disc = std::sqrt(rhs * rhs - 4.0);
        const Cplx r1 = (rhs + disc) / 2.0;
        const Cplx r2 = (rhs - disc) / 2.0;
        return std::abs(r1) < std::abs(r2) ? r1 : r2;
    };
    return {x1, partner(x1, M1), x2, partner(x2, M2), g};
}

Cplx rational_u(Cplx xp, Cplx xm, double g) {
    return Cplx(0, 0.5) * g * (xp + xm) * (1.0 + 1.0 / (xp * xm));
}

namespace {

// explicit q -> 1 limit of the reduced subspace-I coefficient
Cplx x_rational_limit(int M1, int M2, int k1, int k2, int n, Cplx du) {
    if (k1 < 0 || k1 > M1 - 1 || k2 < 0 || k2 > M2 - 1) return 0.0;
    const int K = k1 + k2;
    if (n < 0 || n > K) return 0.0;
    const int M = M1 + M2;
    const double dM = M1 - M2;
    double num = 1.0, den = 1.0;
    for (int i = 1; i <= n; ++i) num *= (M1 - i);
    for (int j = 1; j <= K - n; ++j) num *= (M2 - j);
    for (int i = 1; i <= k1; ++i) den *= (M1 - i);
    for (int j = 1; j <= k2; ++j) den *= (M2 - j);
    Cplx pden = 1.0;
    for (int l = 1; l <= K; ++l) pden *= (du + 0.5 * M - double(l));
    const auto binom = [](int a, int b) {
        if (b < 0 || b > a) return 0.0;
        double r = 1.0;
        for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
        return r;
    };
    Cplx total = 0.0;
    for (int m = 0; m <= k1; ++m) {
        const double bb = binom(k1, m) * binom(k2, n - m);
        if (bb == 0.0) continue;
        Cplx t = bb;
        for (int p = 0; p <= m - 1; ++p) t *= (du + 0.5 * dM - double(p));
        for (int p = -m; p <= k2 - n - 1; ++p) t *= (du - 0.5 * dM - double(p));
        for (int p = 1 + m; p <= k1; ++p) t *= double(M1 - p);
        for (int p = 1; p <= n - m; ++p) t *= double(M2 - K + n - p);
        total += t;
    }
    return (num / den) * total / pden;
}

}  // namespace

VerificationReport check_rational_limit(int M1, int M2, int k1, int k2, int n,
                                        const RationalPoint& pt, double h,
                                        double slope_window) {
    const Cplx du = rational_u(pt.x1p, pt.x1m, pt.g) - rational_u(pt.x2p, pt.x2m, pt.g);
    const Cplx ref = x_rational_limit(M1, M2, k1, k2, n, du);
    const bool extended = eval_context().precision == Precision::Extended;
    const auto deviation = [&](double hv) {
        const Cplx q = 1.0 + hv;
        ModelParams mp{q, pt.g};
        const Cplx xi = xi_of(mp).xi;
        const auto zf = [&](Cplx xp, int M) {
            return zeta_of(xp, xi) / std::pow(q, M);
        };
        const Cplx z12 = zf(pt.x1p, M1) / zf(pt.x2p, M2);
        if (extended) {
            // long-double path for probing deep into the q -> 1 regime
            const std::complex<long double> xl =
                block_X_ld(M1, M2, k1, k2, n, {z12.real(), z12.imag()},
                           {1.0L + (long double)hv, 0.0L});
            return std::abs(Cplx(double(xl.real()), double(xl.imag())) - ref);
        }
        return std::abs(block_X(M1, M2, k1, k2, n, z12, q) - ref);
    };
    const double e1 = deviation(h);
    const double e2 = deviation(h / 2.0);
    std::ostringstream ps;
    ps.precision(17);
    ps << "M=(" << M1 << "," << M2 << ") k=(" << k1 << "," << k2 << ") n=" << n
       << " h=" << h << " du=(" << du.real() << "," << du.imag() << ")";
    // entries already at round-off converge trivially
    const double floor_ = 1e-11 * std::max(1.0, std::abs(ref));
    if (e1 < floor_ && e2 < floor_)
        return VerificationReport::make("rational-limit", ps.str(), 0.0, 0.0, slope_window);
    const double slope = std::log(e1 / e2) / std::log(2.0);
    return VerificationReport::make("rational-limit", ps.str(), std::abs(slope - 1.0),
                                    std::abs(slope - 1.0), slope_window);
}

ClassicalLimitPoint classical_limit_point(double h, double g, Cplx x, int M) {
    ClassicalLimitPoint p;
    p.h = h;
    p.g = g;
    p.x = x;
    p.h_tilde = Cplx(0, -h) / std::sqrt(Cplx(1.0 - h * h));
    p.q_tilde = -double(M) * (p.h_tilde - 1.0 / p.h_tilde) / (x - 1.0 / x);
    p.z_cl = -(x + p.h_tilde) * (1.0 + 1.0 / (x * p.h_tilde)) /
             (p.h_tilde - 1.0 / p.h_tilde);
    p.C_cl = 0.5 * (p.z_cl - 1.0) * p.q_tilde;
    p.D_cl_charge = 0.5 * (p.z_cl + 1.0) * p.q_tilde;
    return p;
}

VerificationReport check_classical_limit(int M1, int M2, int k1, int k2,
                                         const ClassicalLimitPoint& p1,
                                         const ClassicalLimitPoint& p2,
                                         double g_hi) {
    const double h = p1.h;
    const Cplx z1 = p1.z_cl, z2 = p2.z_cl;
    const Cplx z12 = z1 / z2;
    const int M = M1 + M2;
    // reduced coefficients at the exact classical evaluation-parameter ratio
    const auto Xat = [&](double g, int n) {
        const Cplx q = 1.0 + h / (2.0 * g);
        return block_X(M1, M2, k1, k2, n, z12, q);
    };
    const double g_lo = g_hi / 10.0;
    // each sub-check: deviation at two couplings must match the expected
    // remainder order; violation <= 1 passes
    double rmax = 0.0;
    const double floor_ = 1e-10;
    const auto order_check = [&](double e_lo, double e_hi, double factor) {
        if (e_lo < floor_ && e_hi < floor_) return 0.0;
        return e_hi / (3.0 * std::max(floor_, e_lo / factor));
    };
    if (k2 >= 1 && M1 - k1 - 1 >= 1) {
        const Cplx pred = -h * z1 / (z1 - z2) * double(k2 * (M1 - k1 - 1));
        const double e_lo = std::abs(g_lo * Xat(g_lo, k1 + 1) - pred);
        const double e_hi = std::abs(g_hi * Xat(g_hi, k1 + 1) - pred);
        rmax = std::max(rmax, order_check(e_lo, e_hi, g_hi / g_lo));
        rmax = std::max(rmax, e_lo / (0.3 * std::abs(pred)));  // sane already at g_lo
    }
    if (k1 >= 1 && M2 - k2 - 1 >= 1) {
        const Cplx pred = -h * z2 / (z1 - z2) * double(k1 * (M2 - k2 - 1));
        const double e_lo = std::abs(g_lo * Xat(g_lo, k1 - 1) - pred);
        const double e_hi = std::abs(g_hi * Xat(g_hi, k1 - 1) - pred);
        rmax = std::max(rmax, order_check(e_lo, e_hi, g_hi / g_lo));
        rmax = std::max(rmax, e_lo / (0.3 * std::abs(pred)));
    }
    {
        // diagonal entry: remainder O(1/g^2)
        Cplx s = 0.0;
        for (int l = 1; l <= k1 + k2; ++l) s += z2 * (0.5 * M - double(l));
        for (int p = 0; p <= k1 - 1; ++p)
            s += 0.5 * (z1 * double(M2) - z2 * double(M1)) + z1 * double(p);
        for (int p = -k1; p <= k2 - k1 - 1; ++p)
            s += 0.5 * (z1 * double(M1) - z2 * double(M2)) + z1 * double(p);
        const auto pred = [&](double g) {
            return 1.0 - h / (2.0 * g) * double(k1 * k1 + k2 * k2) + h / g * s / (z1 - z2);
        };
        const double e_lo = std::abs(Xat(g_lo, k1) - pred(g_lo));
        const double e_hi = std::abs(Xat(g_hi, k1) - pred(g_hi));
        const double fac = (g_hi / g_lo) * (g_hi / g_lo);
        rmax = std::max(rmax, order_check(e_lo, e_hi, fac));
        rmax = std::max(rmax, e_lo * g_lo / (0.3 * h));  // O(1/g) never enters
    }
    {
        // h -> 0 reduction with du in the undeformed normalization (the same
        // coupling must appear in du and in front of the coefficient)
        const Cplx du = Cplx(0, 1) * g_hi * ((p1.x + 1.0 / p1.x) - (p2.x + 1.0 / p2.x));
        double e_prev = 0.0;
        const std::array<double, 2> hs = {1e-2, 1e-3};
        for (size_t i = 0; i < hs.size(); ++i) {
            const double hv = hs[i];
            const ClassicalLimitPoint q1 = classical_limit_point(hv, p1.g, p1.x, M1);
            const ClassicalLimitPoint q2 = classical_limit_point(hv, p2.g, p2.x, M2);
            const Cplx zz = q1.z_cl / q2.z_cl;
            const Cplx q = 1.0 + hv / (2.0 * g_hi);
            double e = 0.0;
            if (k2 >= 1 && M1 - k1 - 1 >= 1) {
                const Cplx pred = double(k2 * (M1 - k1 - 1)) / du;
                e = std::max(e, g_hi * std::abs(block_X(M1, M2, k1, k2, k1 + 1, zz, q) - pred));
            }
            Cplx sr = 0.0;
            for (int l = 1; l <= k1 + k2; ++l) sr += 0.5 * M - double(l);
            for (int p = 0; p <= k1 - 1; ++p) sr += -0.5 * double(M1 - M2) + double(p);
            for (int p = -k1; p <= k2 - k1 - 1; ++p)
                sr += 0.5 * double(M1 - M2) + double(p);
            e = std::max(e, g_hi * std::abs(block_X(M1, M2, k1, k2, k1, zz, q) -
                                            (1.0 - sr / du)));
            if (i + 1 == hs.size()) {
                // deviations at the O(1/g) contamination floor count as
                // converged; only the h-dependence above it is judged
                const double g_floor = 30.0 / g_hi;
                if (e >= g_floor || e_prev >= g_floor)
                    rmax = std::max(rmax, order_check(e_prev, e, hs[0] / hs[1]));
            }
            e_prev = e;
        }
    }
    std::ostringstream ps;
    ps.precision(17);
    ps << "M=(" << M1 << "," << M2 << ") k=(" << k1 << "," << k2 << ") h=" << h
       << " g=" << g_hi;
    return VerificationReport::make("classical-limit", ps.str(), rmax, rmax, 1.0);
}

VerificationReport check_sq1_relations(const Kinematics& kin1, const Kinematics& kin2,
                                       double tolerance) {
    if (kin2.M != 1)
        throw std::invalid_argument("check_sq1_relations: requires M2 = 1");
    const int Q = kin1.M, M1 = Q, M2 = 1;
    const Cplx q = kin1.params.q;
    const Matrix S = assemble_S(kin1, kin2).entries;
    const Matrix E1op = coproduct_action({1, GenKind::E}, kin1, kin2, true).entries;
    const Matrix F1op = coproduct_action({1, GenKind::F}, kin1, kin2, true).entries;
    const Cplx D = coeff_D(kin1, kin2);
    const auto ti = [&](const StatePair& p) {
        return basis_index(p->first, M1) * 4 + basis_index(p->second, M2);
    };
    const auto col = [&](const StatePair& p) { return Eigen::VectorXcd(S.col(ti(p))); };
    double rmax = 0.0, rfro = 0.0;
    for (int k = 1; k <= Q; ++k) {
        // exchange relation between the mixed-fermion columns
        const StatePair z6 = subspace_III_state(M1, M2, 6, k - 1, 1);
        const StatePair z5 = subspace_III_state(M1, M2, 5, k, 0);
        if (z6 && z5) {
            Eigen::VectorXcd rhs = -q * col(z5);
            rhs(ti(z5)) += D;
            rhs(ti(z6)) += q * D;
            const double r = (col(z6) - rhs).cwiseAbs().maxCoeff();
            rmax = std::max(rmax, r);
            rfro += r * r;
        }
        // ladder-composite relations between neighbouring columns
        const StatePair a1 = subspace_III_state(M1, M2, 1, k, 0);
        const StatePair b1 = subspace_III_state(M1, M2, 1, k - 1, 1);
        if (a1 && b1) {
            const Eigen::VectorXcd lhs =
                (F1op * (E1op * col(a1)) -
                 q * qnumber(k, q) * qnumber(Q - k + 1, q) * col(a1)) /
                qnumber(k, q);
            const double r = (lhs - col(b1)).cwiseAbs().maxCoeff();
            rmax = std::max(rmax, r);
            rfro += r * r;
        }
        const StatePair a3 = subspace_III_state(M1, M2, 3, k, 0);
        const StatePair b3 = subspace_III_state(M1, M2, 3, k - 1, 1);
        if (k >= 2 && a3 && b3) {
            const Eigen::VectorXcd lhs =
                (F1op * (E1op * col(a3)) -
                 q * qnumber(k - 1, q) * qnumber(Q - k, q) * col(a3)) /
                qnumber(k - 1, q);
            const double r = (lhs - col(b3)).cwiseAbs().maxCoeff();
            rmax = std::max(rmax, r);
            rfro += r * r;
        }
    }
    return VerificationReport::make("sq1-relations",
                                    point_string(kin1) + " | " + point_string(kin2),
                                    rmax, std::sqrt(rfro), tolerance);
}

}  // namespace qsu22
