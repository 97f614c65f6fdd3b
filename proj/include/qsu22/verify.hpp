#pragma once

#include "qsu22/oracle.hpp"
#include "qsu22/smatrix.hpp"

// Verification suites: invariance, Yang-Baxter, the rational and classical
// limits, and the bound-state x fundamental inter-block relations.

namespace qsu22 {

/// max over all Chevalley generators and Cartans of the relative residual
/// || S Delta(J) - Delta_op(J) S ||.
VerificationReport check_invariance(const OperatorMatrix& S, const Kinematics& kin1,
                                    const Kinematics& kin2, double tolerance = 1e-8);

/// The factorized-scattering identity restricted to the first invariant
/// subspace, over the full admissible index grid.  Only needs the three
/// evaluation parameters and q.
VerificationReport check_ybe_subspaceI(int M1, int M2, int M3, Cplx z1, Cplx z2,
                                       Cplx z3, Cplx q, double tolerance = 1e-8);

/// S12 S13 S23 = S23 S13 S12 on the full triple tensor space, with the
/// graded index lifting for the outer pair.
VerificationReport check_ybe_full(const Kinematics& kin1, const Kinematics& kin2,
                                  const Kinematics& kin3, double tolerance = 1e-8,
                                  bool corrupt = false);

// x^+- data of two particles satisfying the undeformed constraint
// x + 1/x - y - 1/y = i M / g exactly.
struct RationalPoint {
    Cplx x1p, x1m, x2p, x2m;
    double g = 1.0;
};

/// Two-particle point from free x values: the partner root of the
/// undeformed constraint with smaller modulus is selected.
RationalPoint rational_point(Cplx x1, Cplx x2, double g, int M1, int M2);

/// The evaluation-parameter combination of one particle in the undeformed
/// parametrization, u = (i g / 2)(x^+ + x^-)(1 + 1/(x^+ x^-)).
Cplx rational_u(Cplx xp, Cplx xm, double g);

/// First-order convergence of the closed coefficient to its explicit
/// undeformed limit: evaluates at h and h/2 and requires the log-slope
/// within `slope_window` of 1 (entries already at round-off pass).
VerificationReport check_rational_limit(int M1, int M2, int k1, int k2, int n,
                                        const RationalPoint& pt, double h,
                                        double slope_window = 0.2);

// Strong-coupling data of one particle: q = 1 + h/(2g) and x^+- collapse
// onto x with the leading O(1/g) spread.
struct ClassicalLimitPoint {
    double h = 0.0;
    double g = 0.0;
    Cplx x;
    Cplx h_tilde;      // -i h / sqrt(1 - h^2)
    Cplx q_tilde;      // -M (h~ - 1/h~) / (x - 1/x)
    Cplx z_cl;         // -(x + h~)(1 + 1/(x h~)) / (h~ - 1/h~)
    Cplx C_cl;         // (z - 1) q~ / 2
    Cplx D_cl_charge;  // (z + 1) q~ / 2
};

ClassicalLimitPoint classical_limit_point(double h, double g, Cplx x, int M);

/// Strong-coupling behaviour of the reduced coefficients: the leading
/// off-diagonal entries, the first subleading diagonal term, and the
/// additional h -> 0 reduction, each confirmed by two-g extrapolation.
VerificationReport check_classical_limit(int M1, int M2, int k1, int k2,
                                         const ClassicalLimitPoint& p1,
                                         const ClassicalLimitPoint& p2,
                                         double g_hi = 1e4);

/// Residuals of the inter-block relations of the bound-state x
/// fundamental case, evaluated on the general-path S-matrix.
VerificationReport check_sq1_relations(const Kinematics& kin1, const Kinematics& kin2,
                                       double tolerance = 1e-9);

}  // namespace qsu22
