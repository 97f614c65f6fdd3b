#include "qsu22/kinematics.hpp"

#include <cmath>

namespace qsu22 {

XiPair xi_of(const ModelParams& params) {
    const Cplx q = params.q;
    const Cplx t = q - 1.0 / q;
    const Cplx den = 1.0 - params.g * params.g * t * t;
    if (std::abs(den) < 1e-14)
        throw singular_parameters_error("xi_of: g^2 (q - 1/q)^2 = 1");
    const Cplx gt = std::sqrt(params.g * params.g / den);
    return {Cplx(0, -1) * gt * t, gt};
}

Cplx zeta_of(Cplx x, Cplx xi) {
    if (x == Cplx(0)) throw std::domain_error("zeta_of: x = 0");
    const Cplx d = xi - 1.0 / xi;
    if (std::abs(d) < 1e-14) throw std::domain_error("zeta_of: xi^2 = 1");
    return -(x + 1.0 / x + xi + 1.0 / xi) / d;
}

std::array<Cplx, 2> solve_mass_shell(Cplx xplus, const ModelParams& params, int M) {
    if (xplus == Cplx(0)) throw std::domain_error("solve_mass_shell: x^+ = 0");
    const Cplx q = params.q;
    const Cplx xi = xi_of(params).xi;
    const Cplx qM = std::pow(q, M);
    // -qM (x + 1/x) = C0  ->  x^2 + (C0/qM) x + 1 = 0, root product 1
    const Cplx C0 = (qM - 1.0 / qM) * (xi + 1.0 / xi) - (xplus + 1.0 / xplus) / qM;
    const Cplx b = C0 / qM;
    const Cplx disc = std::sqrt(b * b - 4.0);
    Cplx r1 = (-b + disc) / 2.0;
    Cplx r2 = (-b - disc) / 2.0;
    if (std::abs(r1) < 1e-14 || std::abs(r2) < 1e-14)
        throw std::domain_error("solve_mass_shell: degenerate quadratic");
    if (std::abs(r2) < std::abs(r1)) std::swap(r1, r2);
    return {r1, r2};
}

namespace {

Labels make_labels(Cplx xp, Cplx xm, Cplx gamma, Cplx alpha, Cplx V,
                   Cplx q_half_M, const XiPair& xg, double g, Cplx qnum_M) {
    const Cplx sg = std::sqrt(g / qnum_M);
    const Cplx xi = xg.xi;
    if (std::abs(xp + xi) < 1e-13) throw pole_error("labels: x^+ = -xi (c undefined)");
    if (std::abs(xi * xp + 1.0) < 1e-13) throw pole_error("labels: xi x^+ = -1 (d undefined)");
    Labels L;
    L.a = sg * gamma;
    L.b = sg * (alpha / gamma) * (xm - xp) / xm;
    L.c = sg * (gamma / (alpha * V)) * (Cplx(0, 1) * q_half_M * xg.g_tilde) / (g * (xp + xi));
    L.d = sg * (xg.g_tilde * q_half_M * V / (Cplx(0, 1) * g * gamma)) * (xp - xm) / (xi * xp + 1.0);
    return L;
}

}  // namespace

Kinematics build_kinematics(Cplx xplus, Cplx xminus, Cplx gamma,
                            const ModelParams& params, int M, Tolerance tol) {
    if (M < 1) throw std::domain_error("build_kinematics: M < 1");
    if (gamma == Cplx(0)) throw std::domain_error("build_kinematics: gamma = 0");
    Kinematics kin;
    kin.params = params;
    kin.M = M;
    kin.xplus = xplus;
    kin.xminus = xminus;
    kin.gamma = gamma;
    const XiPair xg = xi_of(params);
    kin.xi = xg.xi;
    kin.g_tilde = xg.g_tilde;
    kin.sqrt_q = std::sqrt(params.q);
    kin.q_half_M = std::pow(params.q, Cplx(M / 2.0));

    const Cplx q = params.q;
    const Cplx qM = std::pow(q, M);
    const double ms = std::abs(zeta_of(xplus, kin.xi) / qM - zeta_of(xminus, kin.xi) * qM);
    if (ms > tol.abs + tol.rel) {
        throw std::invalid_argument("build_kinematics: (x^+, x^-) violate the mass shell");
    }

    kin.z = zeta_of(xplus, kin.xi) / qM;
    const Cplx U2 = (xplus + kin.xi) / (xminus + kin.xi) / qM;
    const Cplx V2 = (kin.xi * xplus + 1.0) / (kin.xi * xminus + 1.0) / qM;
    kin.U = std::sqrt(U2);
    kin.V = std::sqrt(V2);
    kin.U_tilde = 1.0 / kin.U;
    kin.V_tilde = 1.0 / kin.V;
    if (std::abs(U2 * V2 - 1.0) < 1e-12 || std::abs(U2 - V2) < 1e-12)
        throw singular_parameters_error("build_kinematics: z singular (U^2 V^2 = 1 or U^2 = V^2)");

    const Cplx qnM = qnumber(M, q);
    kin.labels = make_labels(xplus, xminus, gamma, params.alpha, kin.V,
                             kin.q_half_M, xg, params.g, qnM);
    // affine substitution: x -> 1/x, gamma -> i a~ gamma / x^+,
    // alpha -> alpha a~^2, V -> V^{-1}
    const Cplx gamma_t = Cplx(0, 1) * params.alpha_tilde * gamma / xplus;
    const Cplx alpha_t = params.alpha * params.alpha_tilde * params.alpha_tilde;
    kin.affine_labels = make_labels(1.0 / xplus, 1.0 / xminus, gamma_t, alpha_t,
                                    kin.V_tilde, kin.q_half_M, xg, params.g, qnM);

    // consistency: z against labels and central elements
    const Cplx z_labels = params.g / (kin.g_tilde * params.alpha * params.alpha_tilde) *
                          (kin.labels.a * kin.affine_labels.b - kin.labels.b * kin.affine_labels.a);
    const Cplx z_central = (1.0 - U2 * V2) / (V2 - U2);
    if (!approx_eq(kin.z, z_labels, tol) || !approx_eq(kin.z, z_central, tol))
        throw std::runtime_error("build_kinematics: z consistency relations failed");
    const double shor = check_shortening(kin);
    if (shor > tol.abs + tol.rel)
        throw std::runtime_error("build_kinematics: shortening condition failed");
    return kin;
}

double check_shortening(const Kinematics& kin) {
    const Cplx q = kin.params.q;
    const Cplx Cq = (kin.V - 1.0 / kin.V) / (q - 1.0 / q);
    const Cplx qnM = qnumber(kin.M, q);
    const Cplx P = kin.labels.a * kin.labels.b * qnM;
    const Cplx K = kin.labels.c * kin.labels.d * qnM;
    const Cplx half = (kin.q_half_M - 1.0 / kin.q_half_M) / (q - 1.0 / q);
    return std::abs(Cq * Cq - P * K - half * half);
}

double check_shortening_affine(const Kinematics& kin) {
    const Cplx q = kin.params.q;
    const Cplx Cq = (kin.V_tilde - 1.0 / kin.V_tilde) / (q - 1.0 / q);
    const Cplx qnM = qnumber(kin.M, q);
    const Cplx P = kin.affine_labels.a * kin.affine_labels.b * qnM;
    const Cplx K = kin.affine_labels.c * kin.affine_labels.d * qnM;
    const Cplx half = (kin.q_half_M - 1.0 / kin.q_half_M) / (q - 1.0 / q);
    return std::abs(Cq * Cq - P * K - half * half);
}

Kinematics random_kinematics(std::mt19937_64& rng, const ModelParams& params, int M) {
    std::uniform_real_distribution<double> mod(1.2, 2.6);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> gmod(0.6, 1.5);
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Cplx xp = std::polar(mod(rng), ang(rng));
        const Cplx gamma = std::polar(gmod(rng), ang(rng));
        try {
            const auto roots = solve_mass_shell(xp, params, M);
            return build_kinematics(xp, roots[0], gamma, params, M);
        } catch (const std::exception&) {
            continue;  // singular locus or pole; draw again
        }
    }
    throw std::runtime_error("random_kinematics: no generic point found");
}

}  // namespace qsu22
