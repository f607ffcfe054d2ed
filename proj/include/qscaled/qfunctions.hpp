#pragma once

#include "qscaled/qseries_base.hpp"
#include "qscaled/theta_eta.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qscaled {

struct PolynomialSpec {
    long n = 0;
    Real alpha{0};
    Real nu{0};

    PolynomialSpec() = default;
    PolynomialSpec(long n_, Real alpha_ = Real(0), Real nu_ = Real(0))
        : n(n_), alpha(std::move(alpha_)), nu(std::move(nu_)) {
        if (n < 0) throw DomainError("polynomial degree must be nonnegative");
        if (!(alpha > Real(-1))) throw DomainError("alpha must exceed -1");
        if (!(nu > Real(-1))) throw DomainError("nu must exceed -1");
    }
};

struct WeightValue {
    Real x;
    Real value;
    Real log_value;  // ln |value|
    int sign = 1;
};

// E_q(z) = (-z;q)_inf, with large arguments handled in the log domain.
inline LogComplex euler_Eq(const Complex& z, const QPoint& qp, const PrecisionContext& ctx) {
    return log_qpoch_infinite(-z, qp, ctx);
}

// Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^{1-x}.
inline LogComplex q_gamma(const Real& x, const QPoint& qp, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    if (x <= Real(0) && x.is_integer())
        throw SingularityError("q-Gamma has a pole at the nonpositive integer " + x.to_string(6));
    const Real tiny = ctx.epsilon();
    LogProduct den;
    Real y = x;
    // Factors 1 - q^{x+k} with x+k < 1 are formed through expm1 to keep their relative accuracy.
    long steps = 0;
    while (y < Real(1)) {
        if (++steps > ctx.max_terms()) throw ResourceError("q-Gamma argument too negative for max_terms");
        Real f = -expm1(y * qp.log_q());
        if (f.is_zero() || abs(f) < tiny)
            throw SingularityError("q-Gamma argument within working precision of a pole");
        den.mul_log_real(log(abs(f)), f.sign() < 0);
        y = y + Real(1);
    }
    den.mul(qpoch_infinite(Complex(qp.pow(y)), qp, ctx));
    LogComplex num = logc_from_complex(qpoch_infinite(Complex(qp.q()), qp, ctx));
    LogComplex r = logc_div(num, den.value());
    r.log_mag += (Real(1) - x) * log1p(-qp.q());
    return r;
}

namespace detail {

inline Real stop_gap(const PrecisionContext& ctx) { return Real(ctx.working_bits() + 16) * Real::ln2(); }

// sum_{k>=0} q^{k^2} (-z)^k / (q;q)_k
inline Measured<LogComplex> aq_once(const Complex& z, const QPoint& qp, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    const Real lz = log(abs(z));
    const Real lq = qp.log_q();
    const Real gap = stop_gap(ctx);
    const Complex u = (-z) / abs(z);
    std::vector<LogTerm> terms;
    Real lqq(0);  // ln (q;q)_k
    Real qk = qp.q();
    Complex uk(1);
    Real peak = Real::inf(-1);
    Real prev = Real::inf(-1);
    for (long k = 0;; ++k) {
        if (k > ctx.max_terms()) throw ResourceError("A_q series exceeds max_terms");
        Real kk(k);
        Real lt = kk * kk * lq + kk * lz - lqq;
        terms.push_back({lt, uk});
        if (lt > peak) peak = lt;
        // past the peak, ratios shrink monotonically
        if (lt < prev && lt - prev < -Real::ln2() && lt < peak - gap) break;
        prev = lt;
        lqq += log1p(-qk);
        qk = qk * qp.q();
        uk = uk * u;
    }
    return measured_log_sum(terms);
}

// sum_k (-1)^k (z/2)^{nu+2k} q^{k(k+nu)} / ((q;q)_k (q^{nu+1};q)_k)
inline Measured<LogComplex> j2_once(const Complex& z, const Real& nu, const QPoint& qp, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    const Complex h = z / Complex(2);
    const Real lh = log(abs(h));
    const Real lq = qp.log_q();
    const Real gap = stop_gap(ctx);
    const Complex hu = h / abs(h);
    const Complex step = -(hu * hu);
    const Complex u0 = polar(Real(1), nu * arg(h));
    std::vector<LogTerm> terms;
    Real lqq(0), lqn(0);
    Real qk = qp.q();
    Real qnk = qp.pow(nu + Real(1));
    Complex uk = u0;
    Real peak = Real::inf(-1);
    Real prev = Real::inf(-1);
    for (long k = 0;; ++k) {
        if (k > ctx.max_terms()) throw ResourceError("J2 series exceeds max_terms");
        Real kk(k);
        Real lt = (nu + ldexp(kk, 1)) * lh + (kk * kk + kk * nu) * lq - lqq - lqn;
        terms.push_back({lt, uk});
        if (lt > peak) peak = lt;
        if (lt < prev && lt - prev < -Real::ln2() && lt < peak - gap) break;
        prev = lt;
        lqq += log1p(-qk);
        lqn += log1p(-qnk);
        qk = qk * qp.q();
        qnk = qnk * qp.q();
        uk = uk * step;
    }
    auto s = measured_log_sum(terms);
    Real pre = log(qpoch_infinite(Complex(qp.pow(nu + Real(1))), qp, ctx).re) -
               log(qpoch_infinite(Complex(qp.q()), qp, ctx).re);
    if (!s.value.is_zero()) s.value.log_mag += pre;
    return s;
}

// Finite sum with log-magnitudes lt_k = k^2 ln q + k ln|x| + extra_k and phases (-x/|x|)^k.
inline Measured<LogComplex> finite_poly_once(const Complex& x, long n, const std::vector<Real>& extra,
                                             const Real& kq_coef, const QPoint& qp, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    const Real lx = log(abs(x));
    const Real lq = qp.log_q();
    const Complex u = (-x) / abs(x);
    std::vector<LogTerm> terms;
    terms.reserve(static_cast<std::size_t>(n) + 1);
    Complex uk(1);
    for (long k = 0; k <= n; ++k) {
        Real kk(k);
        Real lt = (kk * kk + kq_coef * kk) * lq + kk * lx + extra[static_cast<std::size_t>(k)];
        terms.push_back({lt, uk});
        uk = uk * u;
    }
    return measured_log_sum(terms);
}

inline void check_alpha(const Real& alpha) {
    if (!(alpha > Real(-1))) throw DomainError("alpha must exceed -1");
}

}  // namespace detail

// Ramanujan's entire function A_q(z), summed around its peak term.
inline LogComplex ramanujan_Aq(const Complex& z, const QPoint& qp, const PrecisionContext& ctx) {
    if (z.is_zero()) return LogComplex::one();
    return with_cancellation_control(ctx, [&](const PrecisionContext& c) { return detail::aq_once(z, qp, c); });
}

// Jackson's second q-Bessel function; z^nu on the principal branch.
inline LogComplex jackson_J2(const Complex& z, const Real& nu, const QPoint& qp, const PrecisionContext& ctx) {
    if (!(nu > Real(-1))) throw DomainError("nu must exceed -1");
    if (z.is_zero()) {
        if (nu.is_zero()) return LogComplex::one();
        if (nu.sign() > 0) return LogComplex::zero();
        throw SingularityError("J2 at z = 0 with negative nu");
    }
    return with_cancellation_control(ctx, [&](const PrecisionContext& c) { return detail::j2_once(z, nu, qp, c); });
}

// Stieltjes-Wigert polynomial S_n(x;q).
inline LogComplex stieltjes_wigert(const Complex& x, long n, const QPoint& qp, const PrecisionContext& ctx) {
    if (n < 0) throw DomainError("degree must be nonnegative");
    auto eval = [&](const PrecisionContext& c) {
        ScopedPrecision sp(c.working_bits());
        auto lqq = log_qq_prefix(qp, n);
        if (x.is_zero()) return Measured<LogComplex>{LogComplex(-lqq[static_cast<std::size_t>(n)], Real(0)), 0.0};
        std::vector<Real> extra;
        for (long k = 0; k <= n; ++k)
            extra.push_back(-(lqq[static_cast<std::size_t>(k)] + lqq[static_cast<std::size_t>(n - k)]));
        return detail::finite_poly_once(x, n, extra, Real(0), qp, c);
    };
    return with_cancellation_control(ctx, eval);
}

// q-Laguerre polynomial in the orthogonal normalisation
//   L_n^(a)(x;q) = (q^{a+1};q)_n sum_k q^{k^2+ak} (-x)^k / ((q;q)_k (q;q)_{n-k} (q^{a+1};q)_k).
inline LogComplex q_laguerre(const Complex& x, const PolynomialSpec& spec, const QPoint& qp,
                             const PrecisionContext& ctx) {
    detail::check_alpha(spec.alpha);
    const long n = spec.n;
    auto eval = [&](const PrecisionContext& c) {
        ScopedPrecision sp(c.working_bits());
        auto lqq = log_qq_prefix(qp, n);
        auto lqa = log_qpoch_prefix(qp.pow(spec.alpha + Real(1)), qp, n);
        const Real top = lqa[static_cast<std::size_t>(n)];
        if (x.is_zero())
            return Measured<LogComplex>{LogComplex(top - lqq[static_cast<std::size_t>(n)], Real(0)), 0.0};
        std::vector<Real> extra;
        for (long k = 0; k <= n; ++k) {
            auto kk = static_cast<std::size_t>(k);
            extra.push_back(top - lqq[kk] - lqq[static_cast<std::size_t>(n - k)] - lqa[kk]);
        }
        return detail::finite_poly_once(x, n, extra, spec.alpha, qp, c);
    };
    return with_cancellation_control(ctx, eval);
}

// Log-normal weight sqrt(-1/(2 pi ln q)) exp((ln(x/sqrt q))^2 / (2 ln q)).
inline WeightValue weight_sw(const Real& x, const QPoint& qp) {
    if (!(x > Real(0))) throw DomainError("weight_sw needs x > 0");
    WeightValue w;
    w.x = x;
    const Real lq = qp.log_q();
    Real t = log(x) - ldexp(lq, -1);
    w.log_value = ldexp(log(-Real(1) / (ldexp(Real::pi(), 1) * lq)), -1) + t * t / ldexp(lq, 1);
    w.value = exp(w.log_value);
    w.sign = 1;
    return w;
}

// -sin(pi a)/pi * (q;q)_inf / (q^{-a};q)_inf * x^a / (-x;q)_inf, for non-integer a > -1.
inline WeightValue weight_qlaguerre(const Real& x, const Real& alpha, const QPoint& qp, const PrecisionContext& ctx) {
    detail::check_alpha(alpha);
    if (alpha.is_integer())
        throw UnsupportedParameterError("q-Laguerre weight is 0/0 at integer alpha; refusing to guess the limit");
    if (!(x > Real(0))) throw DomainError("weight_qlaguerre needs x > 0");
    ScopedPrecision sp(ctx.working_bits());
    LogProduct p;
    Real s = sin_pi(alpha);
    p.mul(Complex(-s / Real::pi()));
    p.mul(qpoch_infinite(Complex(qp.q()), qp, ctx));
    auto den = qpoch_infinite_ex(Complex(qp.pow(-alpha)), qp, ctx);
    if (den.exact_zero) throw SingularityError("(q^{-alpha};q)_inf vanishes");
    LogComplex lden = logc_from_complex(den.value);
    LogComplex num = p.value();
    num.log_mag += alpha * log(x);
    LogComplex r = logc_div(num, logc_mul(lden, euler_Eq(Complex(x), qp, ctx)));
    WeightValue w;
    w.x = x;
    w.log_value = r.log_mag;
    w.sign = r.phase.is_zero() ? 1 : -1;
    w.value = exp(r.log_mag);
    if (w.sign < 0) w.value = -w.value;
    return w;
}

// s_n(x) = sqrt(q^n (q;q)_n w_sw(x)) S_n(x;q)
inline LogComplex orthonormal_sw(const Real& x, long n, const QPoint& qp, const PrecisionContext& ctx) {
    if (!(x > Real(0))) throw DomainError("orthonormal_sw needs x > 0");
    LogComplex s = stieltjes_wigert(Complex(x), n, qp, ctx);
    ScopedPrecision sp(ctx.working_bits());
    WeightValue w = weight_sw(x, qp);
    Real scale = ldexp(Real(n) * qp.log_q() + log_qq_prefix(qp, n)[static_cast<std::size_t>(n)] + w.log_value, -1);
    if (s.is_zero()) return s;
    return LogComplex(s.log_mag + scale, s.phase);
}

// l_n(x) = sqrt(q^n (q;q)_n / (q^{a+1};q)_n w(x)) L_n^(a)(x;q)
inline LogComplex orthonormal_qlaguerre(const Real& x, const PolynomialSpec& spec, const QPoint& qp,
                                        const PrecisionContext& ctx) {
    if (!(x > Real(0))) throw DomainError("orthonormal_qlaguerre needs x > 0");
    WeightValue w = weight_qlaguerre(x, spec.alpha, qp, ctx);
    if (w.sign < 0) throw DomainError("q-Laguerre weight is negative here; no real orthonormal function");
    LogComplex l = q_laguerre(Complex(x), spec, qp, ctx);
    ScopedPrecision sp(ctx.working_bits());
    const auto n = static_cast<std::size_t>(spec.n);
    Real lqa = log_qpoch_prefix(qp.pow(spec.alpha + Real(1)), qp, spec.n)[n];
    Real scale = ldexp(Real(spec.n) * qp.log_q() + log_qq_prefix(qp, spec.n)[n] - lqa + w.log_value, -1);
    if (l.is_zero()) return l;
    return LogComplex(l.log_mag + scale, l.phase);
}

}  // namespace qscaled
