#include "qsu22/qnum.hpp"

#include <cmath>

namespace qsu22 {

bool approx_eq(Cplx x, Cplx y, Tolerance tol) {
    const double scale = std::max(std::abs(x), std::abs(y));
    return std::abs(x - y) <= tol.abs + tol.rel * scale;
}

EvalContext& eval_context() {
    static EvalContext ctx;
    return ctx;
}

Cplx qnumber(long k, Cplx q) { return detail::qnumber_t<double>(k, q); }

Cplx qfactorial(long n, Cplx q) { return detail::qfactorial_t<double>(n, q); }

Cplx qbinomial(long a, long b, Cplx q) { return detail::qbinomial_t<double>(a, b, q); }

void check_finite(Cplx v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error(std::string("non-finite value in ") + what);
}

}  // namespace qsu22
