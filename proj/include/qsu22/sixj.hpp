#pragma once

#include <array>

#include "qsu22/qnum.hpp"

// Quantum 6j machinery: triangle coefficients, the rescaled symbol, and the
// 6j route to the subspace-I coefficients.

namespace qsu22 {

// Six half-integer spins stored as doubled integers.
struct SixJArgs {
    std::array<int, 6> two_j{};
};

/// q-number with a complex argument, [x]_q = (q^x - q^{-x})/(q - q^{-1}),
/// principal branch of q^x.
Cplx qnumber_c(Cplx x, Cplx q);

/// Principal square root of the factorial ratio
/// [a+b-c]! [b+c-a]! [c+a-b]! / [1+a+b+c]!.
Cplx triangle_delta(int two_a, int two_b, int two_c, Cplx q);

/// The rescaled quantum 6j symbol: the alternating sum with numerator
/// [m+1]! and the seven-factorial denominator.  All factorial arguments
/// must be integers here; an empty sum gives 0.
Cplx rescaled_6j(const SixJArgs& args, Cplx q);

/// Normalized symbol related to the rescaled one by the triangle-coefficient
/// prefactor.
Cplx normalized_6j(const SixJArgs& args, Cplx q);

/// Subspace-I coefficient (with the overall eigenvalue divided out),
/// evaluated through the 6j route with z12 = q^{-2 du}.  The du-dependent
/// factorials only appear in ratios with integer offsets and are expanded
/// as finite products of complex-argument q-numbers.  Returns the symbol
/// value, which must equal block_X for all admissible indices.
Cplx x_via_6j(int M1, int M2, int k1, int k2, int n, Cplx du, Cplx q);

}  // namespace qsu22
