#pragma once

#include <array>
#include <random>

#include "qsu22/qnum.hpp"

// One particle's kinematic record: deformation parameters, Zhukovsky pair,
// central elements, representation labels and their affine partners.

namespace qsu22 {

struct ModelParams {
    Cplx q;
    double g = 1.0;
    Cplx alpha{1.0, 0.0};
    Cplx alpha_tilde{1.0, 0.0};
};

struct singular_parameters_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct pole_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct XiPair {
    Cplx xi;
    Cplx g_tilde;
};

/// g~^2 = g^2 / (1 - g^2 (q - 1/q)^2), principal root; xi = -i g~ (q - 1/q).
XiPair xi_of(const ModelParams& params);

/// zeta(x) = -(x + 1/x + xi + 1/xi) / (xi - 1/xi).
Cplx zeta_of(Cplx x, Cplx xi);

/// Both roots of the mass-shell quadratic for x^-, ascending |x^-|.
/// q^{-M}(x^+ + 1/x^+) - q^M(x^- + 1/x^-) = (q^M - q^{-M})(xi + 1/xi)
std::array<Cplx, 2> solve_mass_shell(Cplx xplus, const ModelParams& params, int M);

struct Labels {
    Cplx a, b, c, d;
};

struct Kinematics {
    ModelParams params;
    int M = 1;
    Cplx xplus, xminus;
    Cplx gamma;
    Cplx xi, g_tilde;
    Cplx z;
    Cplx U, V;             // principal square roots of the U^2, V^2 formulas
    Cplx U_tilde, V_tilde; // plus branch: U^{-1}, V^{-1}
    Labels labels;         // a, b, c, d
    Labels affine_labels;  // a~, b~, c~, d~
    Cplx sqrt_q;           // principal branch, cached
    Cplx q_half_M;         // q^{M/2}, principal branch, cached
};

/// Builds the full record and verifies the consistency relations
/// (mass shell, label products, z identities, shortening) against `tol`.
Kinematics build_kinematics(Cplx xplus, Cplx xminus, Cplx gamma,
                            const ModelParams& params, int M,
                            Tolerance tol = {});

/// |[C]_q^2 - P K - [M/2]_q^2| with P = a b [M]_q, K = c d [M]_q, q^C = V.
double check_shortening(const Kinematics& kin);

/// Same check on the affine labels (with V~).
double check_shortening_affine(const Kinematics& kin);

/// Random generic on-shell point: x^+ from an annulus, the smaller-modulus
/// mass-shell root, gamma on a ring around 1. Retries until the point is
/// clear of the singular loci (U^2 V^2 = 1, U^2 = V^2).
Kinematics random_kinematics(std::mt19937_64& rng, const ModelParams& params, int M);

}  // namespace qsu22
