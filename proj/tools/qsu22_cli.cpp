// Command-line front end: kinematics records, S-matrix computation and
// export, verification suites.
//
// Exit codes: 0 all checks passed, 1 verification failure, 2 usage or
// parameter error.

#include <cstdio>
#include <iostream>

#include "qsu22/config.hpp"
#include "qsu22/io.hpp"
#include "qsu22/sixj.hpp"
#include "qsu22/verify.hpp"

namespace {

using namespace qsu22;

ModelParams params_from(const RunConfig& cfg) {
    ModelParams p;
    p.q = Cplx(cfg.number("q_re"), cfg.number_or("q_im", 0.0));
    p.g = cfg.number("g");
    p.alpha = Cplx(cfg.number_or("alpha_re", 1.0), cfg.number_or("alpha_im", 0.0));
    p.alpha_tilde =
        Cplx(cfg.number_or("alpha_tilde_re", 1.0), cfg.number_or("alpha_tilde_im", 0.0));
    return p;
}

Kinematics particle_from(const RunConfig& cfg, const ModelParams& p, int which) {
    const std::string sfx = std::to_string(which);
    const int M = int(cfg.integer("M" + sfx));
    const Cplx xp(cfg.number("xplus" + sfx + "_re"), cfg.number_or("xplus" + sfx + "_im", 0.0));
    const Cplx gamma(cfg.number_or("gamma" + sfx + "_re", 1.0),
                     cfg.number_or("gamma" + sfx + "_im", 0.0));
    const auto roots = solve_mass_shell(xp, p, M);
    const long root = cfg.integer_or("root" + sfx, 0);  // smaller modulus by default
    if (root != 0 && root != 1) throw config_error("root" + sfx + " must be 0 or 1");
    return build_kinematics(xp, roots[size_t(root)], gamma, p, M);
}

void print_kinematics(const Kinematics& k) {
    const auto c = [](Cplx v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "(% .17g, % .17g)", v.real(), v.imag());
        return std::string(buf);
    };
    std::printf("M        = %d\n", k.M);
    std::printf("x+       = %s\n", c(k.xplus).c_str());
    std::printf("x-       = %s\n", c(k.xminus).c_str());
    std::printf("gamma    = %s\n", c(k.gamma).c_str());
    std::printf("xi       = %s\n", c(k.xi).c_str());
    std::printf("g~       = %s\n", c(k.g_tilde).c_str());
    std::printf("z        = %s\n", c(k.z).c_str());
    std::printf("U        = %s\n", c(k.U).c_str());
    std::printf("V        = %s\n", c(k.V).c_str());
    std::printf("a        = %s\n", c(k.labels.a).c_str());
    std::printf("b        = %s\n", c(k.labels.b).c_str());
    std::printf("c        = %s\n", c(k.labels.c).c_str());
    std::printf("d        = %s\n", c(k.labels.d).c_str());
    std::printf("a~       = %s\n", c(k.affine_labels.a).c_str());
    std::printf("b~       = %s\n", c(k.affine_labels.b).c_str());
    std::printf("c~       = %s\n", c(k.affine_labels.c).c_str());
    std::printf("d~       = %s\n", c(k.affine_labels.d).c_str());
    const Cplx q = k.params.q;
    const Cplx qM = std::pow(q, k.M);
    std::printf("mass-shell residual   = %.3e\n",
                std::abs(zeta_of(k.xplus, k.xi) / qM - zeta_of(k.xminus, k.xi) * qM));
    std::printf("shortening residual   = %.3e\n", check_shortening(k));
    std::printf("affine shortening     = %.3e\n", check_shortening_affine(k));
    const Cplx zc = (1.0 - k.U * k.U * k.V * k.V) / (k.V * k.V - k.U * k.U);
    std::printf("z central residual    = %.3e\n", std::abs(k.z - zc));
}

int print_reports(const std::vector<VerificationReport>& reports) {
    bool all = true;
    std::printf("%-24s %-14s %-14s %-10s %s\n", "check", "max-residual", "fro-residual",
                "tolerance", "result");
    for (const auto& r : reports) {
        std::printf("%-24s %-14.3e %-14.3e %-10.1e %s\n", r.name.c_str(), r.residual_max,
                    r.residual_fro, r.tolerance, r.passed ? "pass" : "FAIL");
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

ExportMeta meta_from(const RunConfig& cfg, const OperatorMatrix& S,
                     const Kinematics& k1, const Kinematics& k2) {
    ExportMeta meta;
    for (const auto& [k, v] : cfg.values)
        if (k != "output") meta.params[k] = v;  // the path is not an input
    meta.params["xminus1_re"] = std::to_string(k1.xminus.real());
    meta.params["xminus1_im"] = std::to_string(k1.xminus.imag());
    meta.params["xminus2_re"] = std::to_string(k2.xminus.real());
    meta.params["xminus2_im"] = std::to_string(k2.xminus.imag());
    if (!meta.params.count("seed")) meta.params["seed"] = "0";
    const VerificationReport inv = check_invariance(S, k1, k2);
    meta.residuals["invariance_max"] = inv.residual_max;
    meta.residuals["invariance_fro"] = inv.residual_fro;
    return meta;
}

int run_verify(const RunConfig& cfg) {
    const std::string suite = cfg.text_or("suite", "all");
    const unsigned long seed = (unsigned long)cfg.integer_or("seed", 12345);
    const int points = int(cfg.integer_or("points", 3));
    ModelParams p;
    p.q = Cplx(cfg.number_or("q_re", 1.07), cfg.number_or("q_im", 0.04));
    p.g = cfg.number_or("g", 0.8);
    std::mt19937_64 rng(seed);
    std::vector<VerificationReport> reports;
    const bool all = suite == "all";
    if (all || suite == "invariance") {
        for (const auto& [m1, m2] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {2, 2}})
            for (int i = 0; i < points; ++i) {
                const Kinematics k1 = random_kinematics(rng, p, m1);
                const Kinematics k2 = random_kinematics(rng, p, m2);
                reports.push_back(check_invariance(assemble_S(k1, k2), k1, k2));
            }
    }
    if (all || suite == "ybe") {
        const bool corrupt = cfg.integer_or("corrupt_s", 0) != 0;
        std::uniform_real_distribution<double> re(0.5, 2.0), im(-1.0, 1.0);
        for (const auto& [m1, m2, m3] :
             std::vector<std::array<int, 3>>{{1, 1, 1}, {2, 1, 1}, {2, 2, 1}}) {
            const Cplx z1(re(rng), im(rng)), z2(re(rng), im(rng)), z3(re(rng), im(rng));
            reports.push_back(check_ybe_subspaceI(m1, m2, m3, z1, z2, z3, p.q));
            const Kinematics k1 = random_kinematics(rng, p, m1);
            const Kinematics k2 = random_kinematics(rng, p, m2);
            const Kinematics k3 = random_kinematics(rng, p, m3);
            reports.push_back(check_ybe_full(k1, k2, k3, 1e-8, corrupt));
        }
    }
    if (all || suite == "sixj") {
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        for (const auto& [m1, m2] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}}) {
            double worst = 0;
            for (int i = 0; i < points; ++i) {
                const Cplx du(u(rng), u(rng));
                const Cplx z12 = std::exp(-2.0 * du * std::log(p.q));
                for (int k1 = 0; k1 < m1; ++k1)
                    for (int k2 = 0; k2 < m2; ++k2)
                        for (int n = 0; n <= k1 + k2; ++n) {
                            const Cplx a = x_via_6j(m1, m2, k1, k2, n, du, p.q);
                            const Cplx b = block_X(m1, m2, k1, k2, n, z12, p.q);
                            worst = std::max(worst,
                                             std::abs(a - b) / std::max(1.0, std::abs(b)));
                        }
            }
            reports.push_back(VerificationReport::make(
                "sixj-identity", "M=(" + std::to_string(m1) + "," + std::to_string(m2) + ")",
                worst, worst, 1e-8));
        }
    }
    if (all || suite == "rational") {
        std::uniform_real_distribution<double> re(1.2, 2.2), im(-1.0, 1.0);
        const RationalPoint pt =
            rational_point(Cplx(re(rng), im(rng)), Cplx(re(rng), im(rng)), p.g, 3, 2);
        for (int k1 = 0; k1 < 3; ++k1)
            for (int k2 = 0; k2 < 2; ++k2)
                for (int n = 0; n <= k1 + k2 && n <= 2; ++n)
                    reports.push_back(check_rational_limit(3, 2, k1, k2, n, pt, 1e-4));
    }
    if (all || suite == "classical") {
        std::uniform_real_distribution<double> re(1.2, 2.2), im(-1.0, 1.0);
        const Cplx x1(re(rng), im(rng)), x2(re(rng), im(rng));
        for (const auto& [m1, m2, k1, k2] :
             std::vector<std::array<int, 4>>{{2, 2, 0, 1}, {3, 2, 1, 1}, {3, 2, 0, 1}}) {
            const auto c1 = classical_limit_point(0.3, 1e3, x1, m1);
            const auto c2 = classical_limit_point(0.3, 1e3, x2, m2);
            reports.push_back(check_classical_limit(m1, m2, k1, k2, c1, c2, 1e4));
        }
    }
    if (all || suite == "sq1") {
        for (int Q : {2, 3}) {
            const Kinematics k1 = random_kinematics(rng, p, Q);
            const Kinematics k2 = random_kinematics(rng, p, 1);
            reports.push_back(check_sq1_relations(k1, k2));
            // closed forms against the general path
            try {
                sq1_blocks(k1, k2, true);
                reports.push_back(VerificationReport::make(
                    "sq1-closed-forms", "Q=" + std::to_string(Q), 0.0, 0.0, 1e-8));
            } catch (const std::exception& e) {
                reports.push_back(VerificationReport::make(
                    "sq1-closed-forms", std::string("Q=") + std::to_string(Q) + " " + e.what(),
                    1.0, 1.0, 1e-8));
            }
        }
    }
    if (reports.empty()) throw config_error("unknown suite: " + suite);
    return print_reports(reports);
}

int dispatch(const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::Kinematics: {
            const ModelParams p = params_from(cfg);
            print_kinematics(particle_from(cfg, p, 1));
            return 0;
        }
        case Command::Smat:
        case Command::Export: {
            const ModelParams p = params_from(cfg);
            const Kinematics k1 = particle_from(cfg, p, 1);
            const Kinematics k2 = particle_from(cfg, p, 2);
            const OperatorMatrix S = assemble_S(k1, k2);
            const VerificationReport inv = check_invariance(S, k1, k2);
            std::printf("S-matrix %ldx%ld computed; invariance residual %.3e\n",
                        long(S.entries.rows()), long(S.entries.cols()), inv.residual_max);
            if (!cfg.output_path.empty()) {
                export_matrix(S, meta_from(cfg, S, k1, k2), cfg.output_path);
                std::printf("written to %s\n", cfg.output_path.c_str());
            } else if (cfg.command == Command::Export) {
                throw config_error("export requires --output");
            }
            return inv.passed ? 0 : 1;
        }
        case Command::Verify:
            return run_verify(cfg);
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
        std::fprintf(stderr,
                     "usage: qsu22 <kinematics|smat|verify|export> [--key value]... "
                     "[--config file]\n");
        return 2;
    }
    try {
        const qsu22::RunConfig cfg = qsu22::parse_config(args);
        return dispatch(cfg);
    } catch (const qsu22::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const qsu22::pole_error& e) {
        std::fprintf(stderr, "pole: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
