#pragma once

#include "qscaled/core_numerics.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace qscaled {

// A series term exp(log_mag) * unit with |unit| = 1.
struct LogTerm {
    Real log_mag;
    Complex unit;
};

template <class T>
struct Measured {
    T value;
    double loss_bits = 0.0;  // log2(sum |terms| / |sum|)
};

namespace detail {

inline Complex pairwise(std::vector<Complex>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    if (hi - lo == 2) return v[lo] + v[lo + 1];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}

inline Real pairwise(std::vector<Real>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    if (hi - lo == 2) return v[lo] + v[lo + 1];
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}

inline double loss_bits(const Real& abs_sum, const Real& sum_abs) {
    if (sum_abs.is_zero()) return abs_sum.is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
    double l = log2_abs(abs_sum) - log2_abs(sum_abs);
    return l > 0.0 ? l : 0.0;
}

}  // namespace detail

// Deterministic pairwise (tree) summation.
inline Complex pairwise_sum(std::vector<Complex>& v) {
    if (v.empty()) return Complex(0);
    return detail::pairwise(v, 0, v.size());
}
inline Real pairwise_sum(std::vector<Real>& v) {
    if (v.empty()) return Real(0);
    return detail::pairwise(v, 0, v.size());
}

// Sum of ordinary complex terms with a cancellation estimate.
inline Measured<Complex> measured_sum(std::vector<Complex>& terms) {
    std::vector<Real> mags;
    mags.reserve(terms.size());
    for (const auto& t : terms) mags.push_back(abs(t));
    Complex s = pairwise_sum(terms);
    Real a = pairwise_sum(mags);
    return {s, detail::loss_bits(a, abs(s))};
}

// Sum of log-domain terms: scale by the largest magnitude, sum pairwise.
inline Measured<LogComplex> measured_log_sum(const std::vector<LogTerm>& terms) {
    if (terms.empty()) return {LogComplex::zero(), 0.0};
    Real peak = Real::inf(-1);
    for (const auto& t : terms)
        if (t.log_mag > peak) peak = t.log_mag;
    if (peak.is_inf()) return {LogComplex::zero(), 0.0};
    std::vector<Complex> scaled;
    std::vector<Real> mags;
    scaled.reserve(terms.size());
    mags.reserve(terms.size());
    for (const auto& t : terms) {
        if (t.log_mag.is_inf()) continue;
        Real m = exp(t.log_mag - peak);
        scaled.push_back(t.unit * m);
        mags.push_back(m);
    }
    Complex s = pairwise_sum(scaled);
    Real a = pairwise_sum(mags);
    double loss = detail::loss_bits(a, abs(s));
    if (s.is_zero()) return {LogComplex::zero(), loss};
    LogComplex v = logc_from_complex(s);
    return {LogComplex(v.log_mag + peak, v.phase), loss};
}

// Re-evaluates at higher precision while the measured cancellation eats into
// the guard bits. `eval(ctx)` must return Measured<T>.
template <class F>
auto with_cancellation_control(const PrecisionContext& ctx, F&& eval) {
    auto r = eval(ctx);
    const double budget = static_cast<double>(ctx.guard_bits()) - 8.0;
    long extra = 0;
    for (int round = 0; round < 4 && r.loss_bits > budget + static_cast<double>(extra); ++round) {
        if (std::isinf(r.loss_bits))
            extra += ctx.precision_bits();
        else
            extra = std::max(extra + 16, static_cast<long>(std::ceil(r.loss_bits)) + 16);
        r = eval(ctx.with_precision(ctx.precision_bits() + extra));
    }
    return r.value;
}

}  // namespace qscaled
