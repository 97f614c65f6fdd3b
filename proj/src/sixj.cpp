#include "qsu22/sixj.hpp"

#include <cmath>

namespace qsu22 {

Cplx qnumber_c(Cplx x, Cplx q) {
    const Cplx qx = std::exp(x * std::log(q));
    return (qx - 1.0 / qx) / (q - 1.0 / q);
}

namespace {

// [top]! / [bot]! for complex arguments with integer offset top - bot,
// as a finite product of q-numbers.
Cplx fact_ratio(Cplx top, Cplx bot, Cplx q) {
    const double offd = (top - bot).real();
    const long off = std::lround(offd);
    Cplx r = 1.0;
    if (off >= 0) {
        for (long j = 1; j <= off; ++j) r *= qnumber_c(bot + Cplx(double(j)), q);
    } else {
        for (long j = 1; j <= -off; ++j) r /= qnumber_c(top + Cplx(double(j)), q);
    }
    return r;
}

long half_sum(const SixJArgs& a, int i, int j, int k) {
    const int s = a.two_j[i] + a.two_j[j] + a.two_j[k];
    if (s % 2 != 0) throw std::domain_error("6j: non-integer triangle sum");
    return s / 2;
}

long half_sum4(const SixJArgs& a, int i, int j, int k, int l) {
    const int s = a.two_j[i] + a.two_j[j] + a.two_j[k] + a.two_j[l];
    if (s % 2 != 0) throw std::domain_error("6j: non-integer quadrangle sum");
    return s / 2;
}

}  // namespace

Cplx triangle_delta(int two_a, int two_b, int two_c, Cplx q) {
    const int s1 = (two_a + two_b - two_c) / 2;
    const int s2 = (two_b + two_c - two_a) / 2;
    const int s3 = (two_c + two_a - two_b) / 2;
    const int s4 = 1 + (two_a + two_b + two_c) / 2;
    if ((two_a + two_b + two_c) % 2 != 0 || s1 < 0 || s2 < 0 || s3 < 0)
        throw std::domain_error("triangle_delta: invalid factorial argument");
    return std::sqrt(qfactorial(s1, q) * qfactorial(s2, q) * qfactorial(s3, q) /
                     qfactorial(s4, q));
}

Cplx rescaled_6j(const SixJArgs& a, Cplx q) {
    const long j1245 = half_sum4(a, 0, 1, 3, 4);
    const long j1346 = half_sum4(a, 0, 2, 3, 5);
    const long j2356 = half_sum4(a, 1, 2, 4, 5);
    const long j123 = half_sum(a, 0, 1, 2);
    const long j345 = half_sum(a, 2, 3, 4);
    const long j246 = half_sum(a, 1, 3, 5);
    const long j156 = half_sum(a, 0, 4, 5);
    const long lo = std::max({0L, j123, j345, j246, j156});
    const long hi = std::min({j1245, j1346, j2356});
    Cplx total = 0.0;
    for (long m = lo; m <= hi; ++m) {
        const Cplx sign = (m % 2 == 0) ? 1.0 : -1.0;
        Cplx den = qfactorial(j1245 - m, q) * qfactorial(j1346 - m, q) *
                   qfactorial(j2356 - m, q) * qfactorial(m - j123, q) *
                   qfactorial(m - j345, q) * qfactorial(m - j246, q) *
                   qfactorial(m - j156, q);
        total += sign * qfactorial(m + 1, q) / den;
    }
    return total;
}

Cplx normalized_6j(const SixJArgs& a, Cplx q) {
    const Cplx pref = std::sqrt(Cplx(a.two_j[2] - 1.0)) * std::sqrt(Cplx(a.two_j[5] - 1.0));
    const int ph2 = -a.two_j[0] - a.two_j[1] + 2 * a.two_j[2] + a.two_j[3] + a.two_j[4];
    if (ph2 % 2 != 0) throw std::domain_error("normalized_6j: non-integer phase");
    const Cplx sign = ((ph2 / 2) % 2 == 0) ? 1.0 : -1.0;
    return sign * pref * triangle_delta(a.two_j[0], a.two_j[1], a.two_j[2], q) *
           triangle_delta(a.two_j[0], a.two_j[4], a.two_j[5], q) *
           triangle_delta(a.two_j[1], a.two_j[3], a.two_j[5], q) *
           triangle_delta(a.two_j[2], a.two_j[3], a.two_j[4], q) * rescaled_6j(a, q);
}

Cplx x_via_6j(int M1, int M2, int k1, int k2, int n, Cplx du, Cplx q) {
    if (k1 < 0 || k1 > M1 - 1 || k2 < 0 || k2 > M2 - 1) return 0.0;
    const int K = k1 + k2;
    if (n > M1 - 1 || n < 0 || n > K) return 0.0;  // denominator factorial pole
    const int M = M1 + M2;
    const double dM2 = 0.5 * (M1 - M2);
    const double M2h = 0.5 * M;

    // integer combinations of the spin assignment
    const long j1245 = M1 - 2;
    const long j1346 = M1 - 2 + k2 - n;
    const long j2356 = M - K - 3;
    const long j123 = M1 - n - 2;
    const long j345 = M1 - 2 - k1;
    // the summation range is bounded by the integer factorial arguments
    // alone; the lower bound may be -1, which is a legal term
    const long lo = std::max(j123, j345);
    const long hi = std::min({j1245, j1346, j2356});
    if (lo > hi) return 0.0;

    Cplx pref = std::exp((Cplx(k2 - n + dM2) + du) * Cplx(double(k1 - n)) * std::log(q));
    pref *= qfactorial(k1, q) / qfactorial(M1 - n - 1, q);
    pref *= qfactorial(M2 - 1 - k2, q) * qfactorial(k2, q);
    // [du + M/2 - 1 - K]! / [du + M/2 - 1]!
    pref *= fact_ratio(du + Cplx(M2h - 1 - K), du + Cplx(M2h - 1), q);
    const Cplx sign = ((k2 + n + M1) % 2 == 0) ? 1.0 : -1.0;

    Cplx total = 0.0;
    for (long m = lo; m <= hi; ++m) {
        const Cplx s = (((m % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
        Cplx t = s * qfactorial(m + 1, q);
        t /= qfactorial(j1245 - m, q) * qfactorial(j1346 - m, q) *
             qfactorial(j2356 - m, q) * qfactorial(m - j123, q) *
             qfactorial(m - j345, q);
        // [du + dM/2]! / [m + du - M/2 + 2]!
        t *= fact_ratio(du + Cplx(dM2), du + Cplx(double(m) - M2h + 2), q);
        // [dM/2 - 1 + k2 - n - du]! / [m - du - M/2 + 1]!
        t *= fact_ratio(Cplx(dM2 - 1 + k2 - n) - du, Cplx(double(m) - M2h + 1) - du, q);
        total += t;
    }
    return sign * pref * total;
}

}  // namespace qsu22
