#pragma once

#include <complex>
#include <stdexcept>

// Complex q-number arithmetic shared by every other module.
//
// All scalars are double-precision complex.  The building blocks are also
// provided as templates over the real type so that callers can switch to
// long-double evaluation through qsu22::EvalContext when probing limits
// with q very close to 1.

namespace qsu22 {

using Cplx = std::complex<double>;

struct Tolerance {
    double rel = 1e-9;
    double abs = 1e-12;
};

/// |x - y| <= abs + rel * max(|x|, |y|)
bool approx_eq(Cplx x, Cplx y, Tolerance tol = {});

enum class Precision { Double, Extended };

struct EvalContext {
    Precision precision = Precision::Double;
};

EvalContext& eval_context();

namespace detail {

// Guard radius around q = +-1 below which the removable singularity of
// [k]_q is evaluated analytically.
inline constexpr double kUnitGuard = 1e-11;

template <typename R>
std::complex<R> qnumber_t(long k, std::complex<R> q) {
    using C = std::complex<R>;
    if (q == C(0)) throw std::domain_error("qnumber: q = 0");
    if (std::abs(q - C(1)) < kUnitGuard || std::abs(q + C(1)) < kUnitGuard) {
        // [k]_q -> k q^{k-1} at q = +-1
        return R(k) * std::pow(q, C(R(k - 1)));
    }
    const C qk = std::pow(q, C(R(k)));
    return (qk - R(1) / qk) / (q - R(1) / q);
}

template <typename R>
std::complex<R> qfactorial_t(long n, std::complex<R> q) {
    if (n < 0) throw std::domain_error("qfactorial: n < 0");
    std::complex<R> r(1);
    for (long i = 1; i <= n; ++i) r *= qnumber_t<R>(i, q);
    return r;
}

template <typename R>
std::complex<R> qbinomial_t(long a, long b, std::complex<R> q) {
    if (b < 0 || b > a) return std::complex<R>(0);  // out of range -> 0
    return qfactorial_t<R>(a, q) / (qfactorial_t<R>(b, q) * qfactorial_t<R>(a - b, q));
}

}  // namespace detail

/// [k]_q = (q^k - q^{-k}) / (q - q^{-1}); k q^{k-1} at the removable
/// singularity q = +-1.
Cplx qnumber(long k, Cplx q);

/// [n]! = [n]_q [n-1]_q ... [1]_q, [0]! = 1.
Cplx qfactorial(long n, Cplx q);

/// [a]! / ([b]! [a-b]!); zero outside 0 <= b <= a.
Cplx qbinomial(long a, long b, Cplx q);

void check_finite(Cplx v, const char* what);

}  // namespace qsu22
