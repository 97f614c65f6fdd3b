#pragma once

#include "qsu22/repspace.hpp"

// Independent brute-force S-matrix: the intertwining equations stacked into
// one linear system and solved for the numerical nullspace.

namespace qsu22 {

struct degeneracy_error : std::runtime_error {
    std::vector<double> small_singular_values;
    degeneracy_error(const std::string& what, std::vector<double> sv)
        : std::runtime_error(what), small_singular_values(std::move(sv)) {}
};

struct OracleOptions {
    // Generators whose intertwining equations are stacked.
    std::vector<GeneratorId> generators = default_generators();
    // A kernel direction counts when its singular value is below
    // gap_threshold * sigma_max and the next one is above.
    double gap_threshold = 1e-8;

    static std::vector<GeneratorId> default_generators() {
        std::vector<GeneratorId> g;
        for (int node = 1; node <= 4; ++node) {
            g.push_back({node, GenKind::E});
            g.push_back({node, GenKind::F});
            g.push_back({node, GenKind::K});
        }
        return g;
    }
    static std::vector<GeneratorId> without_cartans() {
        std::vector<GeneratorId> g;
        for (int node = 1; node <= 4; ++node) {
            g.push_back({node, GenKind::E});
            g.push_back({node, GenKind::F});
        }
        return g;
    }
    static std::vector<GeneratorId> non_affine_only() {
        std::vector<GeneratorId> g;
        for (int node = 1; node <= 3; ++node) {
            g.push_back({node, GenKind::E});
            g.push_back({node, GenKind::F});
            g.push_back({node, GenKind::K});
        }
        return g;
    }
};

struct OracleResult {
    OperatorMatrix S;        // normalized so the vacuum scatters to itself
    double sigma1 = 0.0;     // smallest singular value (residual-refined)
    double sigma2 = 0.0;     // second smallest
    double sigma_max = 0.0;
};

/// Nullspace of the stacked system S Delta(J) - Delta_op(J) S = 0 over the
/// generator set.  Requires exactly one singular value below the gap
/// threshold; throws degeneracy_error otherwise.
OracleResult intertwiner_nullspace(const Kinematics& kin1, const Kinematics& kin2,
                                   const OracleOptions& opts = {});

/// The 5 smallest singular values of the stacked system (ascending), the
/// first refined through the residual of the kernel vector.
std::vector<double> kernel_spectrum(const Kinematics& kin1, const Kinematics& kin2,
                                    const OracleOptions& opts = {});

}  // namespace qsu22
