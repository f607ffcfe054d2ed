#pragma once

#include "qscaled/qfunctions.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qscaled {

// ---------------------------------------------------------------------------
// Exact theta representations with certified residual bounds
// ---------------------------------------------------------------------------

struct ThetaRepResult {
    LogComplex lhs;        // function value at the scaled argument
    LogComplex prefactor;  // lhs = prefactor * (theta_term + residual)
    Complex theta_term;
    Complex residual;
    Real bound;
    bool satisfied = false;
};

namespace detail {

// z^m for integer m, with exact signs for real z.
inline LogComplex logc_int_pow(const Complex& z, long m) {
    Real r = abs(z);
    Complex u = pow(z / r, m);
    LogComplex lu = logc_from_complex(u);
    return LogComplex(Real(m) * log(r), lu.phase);
}

inline void require_nonzero(const Complex& z) {
    if (z.is_zero()) throw DomainError("z must be nonzero");
}

inline void gate(const QPoint& qp, long n, long divisor) {
    if (n < 1) throw DomainError("n must be positive");
    Real v = ldexp(qp.pow(Real(n) / Real(divisor)), 1) / (Real(1) - qp.q());
    if (!(v < Real(1)))
        throw RegimeError("regime gate 2q^{n/" + std::to_string(divisor) + "}/(1-q) < 1 not met at n = " +
                          std::to_string(n) + " (value " + v.to_string(6) + ")");
}

inline ThetaRepResult finish_rep(LogComplex lhs, LogComplex prefactor, Complex theta_term, Real bound) {
    ThetaRepResult r;
    Complex scaled = to_complex(logc_div(lhs, prefactor));
    r.residual = scaled - theta_term;
    r.lhs = std::move(lhs);
    r.prefactor = std::move(prefactor);
    r.theta_term = std::move(theta_term);
    r.bound = std::move(bound);
    r.satisfied = abs(r.residual) <= r.bound;
    return r;
}

// theta_3(|z|^{-1} q^c; q) {q^{n/2}/(1-q) + q^{f^2}/|z|^f}, f = floor(n/2)
inline Real half_gate_envelope(const Complex& z, const QPoint& qp, long n, const PrecisionContext& ctx) {
    Real az = abs(z);
    Real th3 = theta_z(3, Complex(Real(1) / az), qp, ctx).re;
    long f = n / 2;
    Real t1 = qp.pow(Real(n) / Real(2)) / (Real(1) - qp.q());
    Real t2 = qp.pow(Real(f * f)) / pow(az, f);
    return th3 * (t1 + t2);
}

// theta_3(|z|^{-1} q^chi; q) {q^{n/4}/(1-q) + |z|^f q^{f^2 - chi f} + q^{f^2 + chi f}/|z|^f}, f = floor(n/4)
inline Real quarter_gate_envelope(const Complex& z, const QPoint& qp, long n, const PrecisionContext& ctx) {
    Real az = abs(z);
    long c = chi(n);
    Real th3 = theta_z(3, Complex(qp.pow(Real(c)) / az), qp, ctx).re;
    long f = n / 4;
    Real t1 = qp.pow(Real(n) / Real(4)) / (Real(1) - qp.q());
    Real t2 = pow(az, f) * qp.pow(Real(f * f - c * f));
    Real t3 = qp.pow(Real(f * f + c * f)) / pow(az, f);
    return th3 * (t1 + t2 + t3);
}

inline LogComplex log_qq_inf(const QPoint& qp, const PrecisionContext& ctx) {
    return logc_from_complex(qpoch_infinite(Complex(qp.q()), qp, ctx));
}

}  // namespace detail

// A_q(q^{-2n} z) = (-z)^n {theta_4(z^{-1};q) + e(n)} / ((q;q)_inf q^{n^2}), constant 4.
inline ThetaRepResult aq_theta_rep(const Complex& z, const QPoint& qp, long n, const PrecisionContext& ctx) {
    detail::require_nonzero(z);
    detail::gate(qp, n, 2);
    ScopedPrecision sp(ctx.working_bits());
    Complex zarg = z * qp.pow(Real(-2 * n));
    LogComplex lhs = ramanujan_Aq(zarg, qp, ctx);
    LogComplex pre = detail::logc_int_pow(-z, n);
    pre = logc_div(pre, detail::log_qq_inf(qp, ctx));
    pre.log_mag -= Real(n * n) * qp.log_q();
    Complex th = theta_z(4, Complex(1) / z, qp, ctx);
    Real bound = Real(4) * detail::half_gate_envelope(z, qp, n, ctx);
    return detail::finish_rep(lhs, pre, th, bound);
}

// J_nu^(2)(2 sqrt(z q^{-2n-nu}); q) = z^{n+nu/2} {theta_4(z^{-1};q) + e(n)} / ((-1)^n (q;q)^2 q^{n^2+n nu+nu^2/2}), constant 12.
inline ThetaRepResult bessel_theta_rep(const Complex& z, const Real& nu, const QPoint& qp, long n,
                                       const PrecisionContext& ctx) {
    if (!(nu > Real(-1))) throw DomainError("nu must exceed -1");
    detail::require_nonzero(z);
    detail::gate(qp, n, 2);
    ScopedPrecision sp(ctx.working_bits());
    Real nn(n);
    Complex zarg = Real(2) * sqrt(z * qp.pow(-(ldexp(nn, 1) + nu)));
    LogComplex lhs = jackson_J2(zarg, nu, qp, ctx);
    Real p = nn + ldexp(nu, -1);
    LogComplex pre(p * log(abs(z)), wrap_phase(p * arg(z)));
    LogComplex den = logc_mul(detail::log_qq_inf(qp, ctx), detail::log_qq_inf(qp, ctx));
    den.log_mag += (nn * nn + nn * nu + ldexp(nu * nu, -1)) * qp.log_q();
    if (n % 2 != 0) den = logc_neg(den);
    pre = logc_div(pre, den);
    Complex th = theta_z(4, Complex(1) / z, qp, ctx);
    Real bound = Real(12) * detail::half_gate_envelope(z, qp, n, ctx);
    return detail::finish_rep(lhs, pre, th, bound);
}

namespace detail {

// (-z)^{floor(n/2)} / ((q;q)_inf^2 q^{floor(n/2) floor((n+1)/2)})
inline LogComplex polynomial_rep_prefactor(const Complex& z, const QPoint& qp, long n, const PrecisionContext& ctx) {
    long h = n / 2, h1 = (n + 1) / 2;
    LogComplex pre = logc_int_pow(-z, h);
    LogComplex den = logc_mul(log_qq_inf(qp, ctx), log_qq_inf(qp, ctx));
    den.log_mag += Real(h * h1) * qp.log_q();
    return logc_div(pre, den);
}

}  // namespace detail

// S_n(z q^{-n}; q) = (-z)^{floor(n/2)} {theta_4(z^{-1} q^chi; q) + e(n)} / ((q;q)^2 q^{...}), constant 12.
inline ThetaRepResult sw_theta_rep(const Complex& z, const QPoint& qp, long n, const PrecisionContext& ctx) {
    detail::require_nonzero(z);
    detail::gate(qp, n, 4);
    ScopedPrecision sp(ctx.working_bits());
    LogComplex lhs = stieltjes_wigert(z * qp.pow(Real(-n)), n, qp, ctx);
    LogComplex pre = detail::polynomial_rep_prefactor(z, qp, n, ctx);
    Complex th = theta_z(4, qp.pow(Real(chi(n))) / z, qp, ctx);
    Real bound = Real(12) * detail::quarter_gate_envelope(z, qp, n, ctx);
    return detail::finish_rep(lhs, pre, th, bound);
}

// L_n^(a)(z q^{-n-a}; q), same representation with constant 60.
inline ThetaRepResult laguerre_theta_rep(const Complex& z, const Real& alpha, const QPoint& qp, long n,
                                         const PrecisionContext& ctx) {
    if (!(alpha > Real(-1))) throw DomainError("alpha must exceed -1");
    detail::require_nonzero(z);
    detail::gate(qp, n, 4);
    ScopedPrecision sp(ctx.working_bits());
    LogComplex lhs = q_laguerre(z * qp.pow(-(Real(n) + alpha)), PolynomialSpec(n, alpha), qp, ctx);
    LogComplex pre = detail::polynomial_rep_prefactor(z, qp, n, ctx);
    Complex th = theta_z(4, qp.pow(Real(chi(n))) / z, qp, ctx);
    Real bound = Real(60) * detail::quarter_gate_envelope(z, qp, n, ctx);
    return detail::finish_rep(lhs, pre, th, bound);
}

// ---------------------------------------------------------------------------
// Scaled limits
// ---------------------------------------------------------------------------

enum class ScaledLimit {
    euler_positive,        // E_q(+exp 2pi(u + n^{1-a} - n^{-a}/2))
    euler_negative,        // E_q(-exp ...)
    qgamma_left,           // 1/Gamma_q(1/2 - n - n^a u)
    qgamma_right,          // 1/Gamma_q(1/2 + n + n^a u)
    aq_negative,           // A_q(-exp 2pi(u + n^{1-a}))
    aq_positive,           // A_q(+exp ...)
    bessel_imaginary,      // J_nu^(2)(2i exp pi(u + n^{1-a} + nu n^{-a}/2))
    bessel_real,           // J_nu^(2)(2 exp ...)
    sw_negative,           // S_n(-exp 2pi(u + n^{1-a}))
    sw_positive,           // S_n(+exp ...)
    sw_orthonormal,        // s_n(exp ...)
    laguerre_negative,     // L_n^(a)(-exp 2pi(u + n^{1-a} + alpha n^{-a}))
    laguerre_positive,     // L_n^(a)(+exp ...)
    laguerre_orthonormal,  // l_n^(a)(exp ...)
};

inline constexpr std::array<ScaledLimit, 14> all_scaled_limits = {
    ScaledLimit::euler_positive,   ScaledLimit::euler_negative,    ScaledLimit::qgamma_left,
    ScaledLimit::qgamma_right,     ScaledLimit::aq_negative,       ScaledLimit::aq_positive,
    ScaledLimit::bessel_imaginary, ScaledLimit::bessel_real,       ScaledLimit::sw_negative,
    ScaledLimit::sw_positive,      ScaledLimit::sw_orthonormal,    ScaledLimit::laguerre_negative,
    ScaledLimit::laguerre_positive, ScaledLimit::laguerre_orthonormal};

inline std::string_view limit_name(ScaledLimit l) {
    switch (l) {
        case ScaledLimit::euler_positive: return "euler-positive";
        case ScaledLimit::euler_negative: return "euler-negative";
        case ScaledLimit::qgamma_left: return "qgamma-left";
        case ScaledLimit::qgamma_right: return "qgamma-right";
        case ScaledLimit::aq_negative: return "aq-negative";
        case ScaledLimit::aq_positive: return "aq-positive";
        case ScaledLimit::bessel_imaginary: return "bessel-imaginary";
        case ScaledLimit::bessel_real: return "bessel-real";
        case ScaledLimit::sw_negative: return "sw-negative";
        case ScaledLimit::sw_positive: return "sw-positive";
        case ScaledLimit::sw_orthonormal: return "sw-orthonormal";
        case ScaledLimit::laguerre_negative: return "laguerre-negative";
        case ScaledLimit::laguerre_positive: return "laguerre-positive";
        case ScaledLimit::laguerre_orthonormal: return "laguerre-orthonormal";
    }
    return "unknown";
}

enum class NomeRule { two_pi, pi };  // q = e^{-2 pi n^{-a}} or e^{-pi n^{-a}}

inline NomeRule nome_rule_for(ScaledLimit l) {
    switch (l) {
        case ScaledLimit::aq_negative:
        case ScaledLimit::aq_positive:
        case ScaledLimit::bessel_imaginary:
        case ScaledLimit::bessel_real: return NomeRule::pi;
        default: return NomeRule::two_pi;
    }
}

inline bool needs_nu(ScaledLimit l) { return l == ScaledLimit::bessel_imaginary || l == ScaledLimit::bessel_real; }
inline bool needs_alpha(ScaledLimit l) {
    return l == ScaledLimit::laguerre_negative || l == ScaledLimit::laguerre_positive ||
           l == ScaledLimit::laguerre_orthonormal;
}

struct ScaledRegime {
    long n = 1;
    Real a_exp{0.4};
    Real u{0};
    NomeRule nome_rule = NomeRule::two_pi;
    std::optional<Real> nu;
    std::optional<Real> alpha;
    std::optional<Real> gamma;

    ScaledRegime(long n_, Real a_, Real u_, NomeRule rule, std::optional<Real> nu_ = std::nullopt,
                 std::optional<Real> alpha_ = std::nullopt, std::optional<Real> gamma_ = std::nullopt)
        : n(n_), a_exp(std::move(a_)), u(std::move(u_)), nome_rule(rule), nu(std::move(nu_)),
          alpha(std::move(alpha_)), gamma(std::move(gamma_)) {
        if (n < 1) throw DomainError("n must be positive");
        if (!(a_exp > Real(0) && a_exp < Real(0.5))) throw DomainError("a_exp must lie in (0, 1/2)");
        if (nu && !(*nu > Real(-1))) throw DomainError("nu must exceed -1");
        if (alpha && !(*alpha > Real(-1))) throw DomainError("alpha must exceed -1");
        if (gamma && !(*gamma > Real(0))) throw DomainError("gamma must be positive");
    }

    // A regime with the nome rule of `l` and nu = alpha = 1/2 unless given.
    static ScaledRegime for_limit(ScaledLimit l, long n, const Real& a, const Real& u,
                                  const Real& nu = Real(0.5), const Real& alpha = Real(0.5)) {
        return ScaledRegime(n, a, u, nome_rule_for(l), needs_nu(l) ? std::optional<Real>(nu) : std::nullopt,
                            needs_alpha(l) ? std::optional<Real>(alpha) : std::nullopt);
    }

    QPoint nome() const {
        Real c = nome_rule == NomeRule::two_pi ? Real(2) : Real(1);
        return QPoint::from_log(-(c * Real::pi() / pow(Real(n), a_exp)));
    }
};

struct AsymptoticComparison {
    LogComplex direct;
    LogComplex main_term;
    Real rel_dev;
    Real stated_rate;         // envelope coefficient times n^a
    Real oscillatory_factor;  // 1 when the formula has no cosine
    bool absolute_mode = false;
};

// Main term split as envelope * oscillatory_factor.
struct MainTermParts {
    LogComplex envelope;
    Real oscillatory_factor{1};
    bool oscillatory = false;
};

namespace detail {

inline void check_regime(ScaledLimit l, const ScaledRegime& r) {
    if (r.nome_rule != nome_rule_for(l))
        throw ConfigurationError(std::string("nome rule does not match the limit ") + std::string(limit_name(l)));
    if (needs_nu(l) && !r.nu) throw ConfigurationError("this limit needs nu");
    if (needs_alpha(l) && !r.alpha) throw ConfigurationError("this limit needs alpha");
}

inline Real rate_coefficient(ScaledLimit l) {
    const Real pi = Real::pi();
    switch (l) {
        case ScaledLimit::euler_negative:
        case ScaledLimit::qgamma_left:
        case ScaledLimit::qgamma_right:
        case ScaledLimit::aq_positive:
        case ScaledLimit::bessel_real: return ldexp(pi, 1);
        case ScaledLimit::sw_negative:
        case ScaledLimit::laguerre_negative: return ldexp(pi, -1);
        default: return pi;
    }
}

}  // namespace detail

inline MainTermParts main_term_parts(ScaledLimit l, const ScaledRegime& r, const PrecisionContext& ctx) {
    detail::check_regime(l, r);
    ScopedPrecision sp(ctx.working_bits());
    const Real pi = Real::pi();
    const Real nn(r.n);
    const Real A = pow(nn, r.a_exp);  // n^a
    const Real iA = Real(1) / A;      // n^{-a}
    const Real& u = r.u;
    const Real Au = A * u;
    const Real s = Au + nn;
    const Real B = pi * iA * s * s;  // pi n^{-a} (n^a u + n)^2
    const Real half_log_A = ldexp(log(A), -1);
    const Real ln2 = Real::ln2();
    const LogComplex sign_n = logc_unit_pi(Real(r.n % 2));

    MainTermParts m;
    auto cos_pi_Au = [&] { return cos_pi(Au); };
    auto cos_half = [&] { return cos_pi(ldexp(s, -1)); };
    auto real_env = [&](const Real& lm) { return LogComplex(lm, Real(0)); };

    switch (l) {
        case ScaledLimit::euler_positive:
            m.envelope = real_env(B + pi / Real(12) * (A - iA));
            break;
        case ScaledLimit::euler_negative:
            m.envelope = logc_mul(real_env(ln2 + B - pi / Real(12) * (ldexp(A, 1) + iA)), sign_n);
            m.oscillatory_factor = cos_pi_Au();
            m.oscillatory = true;
            break;
        case ScaledLimit::qgamma_left: {
            Real l1 = log1p(-exp(-ldexp(pi, 1) * iA));
            m.envelope = logc_mul(real_env(ln2 + B - half_log_A - (pi * A / Real(12) + pi * iA / Real(6)) -
                                           (nn + Au + Real(0.5)) * l1),
                                  sign_n);
            m.oscillatory_factor = cos_pi_Au();
            m.oscillatory = true;
            break;
        }
        case ScaledLimit::qgamma_right: {
            Real l1 = log1p(-exp(-ldexp(pi, 1) * iA));
            m.envelope = real_env(pi * A / Real(12) - pi * iA / Real(12) - half_log_A - (Real(0.5) - nn - Au) * l1);
            break;
        }
        case ScaledLimit::aq_negative:
            m.envelope = real_env(B - ldexp(ln2, -1) - (pi * iA / Real(24) - pi * A / Real(6)));
            break;
        case ScaledLimit::aq_positive:
            m.envelope = logc_mul(real_env(ldexp(ln2, -1) + B - pi * (A / Real(12) + iA / Real(24))), sign_n);
            m.oscillatory_factor = cos_pi_Au();
            m.oscillatory = true;
            break;
        case ScaledLimit::bessel_imaginary: {
            const Real& nu = *r.nu;
            Real t = s + ldexp(nu, -1);
            Real lm = pi * iA * t * t - ln2 - half_log_A -
                      pi * (iA / Real(12) - A / Real(3) - iA * nu * nu / Real(4));
            m.envelope = LogComplex(lm, wrap_phase(ldexp(pi * nu, -1)));  // i^nu
            break;
        }
        case ScaledLimit::bessel_real: {
            const Real& nu = *r.nu;
            Real t = s + ldexp(nu, -1);
            Real lm = pi * iA * t * t - half_log_A - pi * (iA / Real(12) - A / Real(12) - iA * nu * nu / Real(4));
            m.envelope = logc_mul(real_env(lm), sign_n);
            m.oscillatory_factor = cos_pi_Au();
            m.oscillatory = true;
            break;
        }
        case ScaledLimit::sw_negative:
        case ScaledLimit::laguerre_negative:
            m.envelope = real_env(ldexp(B, -1) - ldexp(ln2 + log(A), -1) - (pi * iA / Real(6) - pi * A / Real(6)));
            break;
        case ScaledLimit::sw_positive:
        case ScaledLimit::laguerre_positive:
            m.envelope = real_env(ldexp(ln2 - log(A), -1) + ldexp(B, -1) - (pi * iA / Real(6) - pi * A / Real(24)));
            m.oscillatory_factor = cos_half();
            m.oscillatory = true;
            break;
        case ScaledLimit::sw_orthonormal:
        case ScaledLimit::laguerre_orthonormal: {
            Real lm = -ldexp(pi * u, -1) - ldexp(log(pi), -1) -
                      (Real(3) * pi * nn * iA / Real(2) + pi * iA / Real(4));
            if (l == ScaledLimit::laguerre_orthonormal) lm -= pi * *r.alpha * iA;
            m.envelope = real_env(lm);
            m.oscillatory_factor = cos_half();
            m.oscillatory = true;
            break;
        }
    }
    return m;
}

inline LogComplex main_term(ScaledLimit l, const ScaledRegime& r, const PrecisionContext& ctx) {
    MainTermParts p = main_term_parts(l, r, ctx);
    ScopedPrecision sp(ctx.working_bits());
    if (!p.oscillatory) return p.envelope;
    return logc_mul(p.envelope, logc_from_real(p.oscillatory_factor));
}

// Direct evaluation of the function at the limit's scaled argument.
inline LogComplex scaled_direct(ScaledLimit l, const ScaledRegime& r, const PrecisionContext& ctx) {
    detail::check_regime(l, r);
    ScopedPrecision sp(ctx.working_bits());
    const Real pi = Real::pi();
    const Real two_pi = ldexp(pi, 1);
    const Real nn(r.n);
    const Real A = pow(nn, r.a_exp);
    const Real iA = Real(1) / A;
    const Real& u = r.u;
    const Real n1a = nn * iA;  // n^{1-a}
    const QPoint qp = r.nome();

    switch (l) {
        case ScaledLimit::euler_positive:
        case ScaledLimit::euler_negative: {
            Real x = exp(two_pi * (u + n1a - ldexp(iA, -1)));
            if (l == ScaledLimit::euler_negative) x = -x;
            return euler_Eq(Complex(x), qp, ctx);
        }
        case ScaledLimit::qgamma_left:
            return logc_inv(q_gamma(Real(0.5) - nn - A * u, qp, ctx));
        case ScaledLimit::qgamma_right:
            return logc_inv(q_gamma(Real(0.5) + nn + A * u, qp, ctx));
        case ScaledLimit::aq_negative:
        case ScaledLimit::aq_positive: {
            Real y = exp(two_pi * (u + n1a));
            if (l == ScaledLimit::aq_negative) y = -y;
            return ramanujan_Aq(Complex(y), qp, ctx);
        }
        case ScaledLimit::bessel_imaginary:
        case ScaledLimit::bessel_real: {
            Real w = ldexp(exp(pi * (u + n1a + ldexp(*r.nu * iA, -1))), 1);
            Complex z = l == ScaledLimit::bessel_real ? Complex(w) : Complex(Real(0), w);
            return jackson_J2(z, *r.nu, qp, ctx);
        }
        case ScaledLimit::sw_negative:
        case ScaledLimit::sw_positive:
        case ScaledLimit::sw_orthonormal: {
            Real y = exp(two_pi * (u + n1a));
            if (l == ScaledLimit::sw_orthonormal) return orthonormal_sw(y, r.n, qp, ctx);
            if (l == ScaledLimit::sw_negative) y = -y;
            return stieltjes_wigert(Complex(y), r.n, qp, ctx);
        }
        case ScaledLimit::laguerre_negative:
        case ScaledLimit::laguerre_positive:
        case ScaledLimit::laguerre_orthonormal: {
            const Real& alpha = *r.alpha;
            Real y = exp(two_pi * (u + n1a + alpha * iA));
            PolynomialSpec spec(r.n, alpha);
            if (l == ScaledLimit::laguerre_orthonormal) return orthonormal_qlaguerre(y, spec, qp, ctx);
            if (l == ScaledLimit::laguerre_negative) y = -y;
            return q_laguerre(Complex(y), spec, qp, ctx);
        }
    }
    throw ConfigurationError("unknown scaled limit");
}

// Relative deviation of the direct value from the main term. Where the cosine
// factor is at most 0.1 in size, the deviation is measured absolutely after
// dividing out the non-oscillatory envelope.
inline AsymptoticComparison compare_asymptotic(ScaledLimit l, const ScaledRegime& r, const PrecisionContext& ctx) {
    AsymptoticComparison c;
    MainTermParts parts = main_term_parts(l, r, ctx);
    c.direct = scaled_direct(l, r, ctx);
    ScopedPrecision sp(ctx.working_bits());
    c.oscillatory_factor = parts.oscillatory_factor;
    c.main_term = parts.oscillatory ? logc_mul(parts.envelope, logc_from_real(parts.oscillatory_factor))
                                    : parts.envelope;
    c.stated_rate = detail::rate_coefficient(l) * pow(Real(r.n), r.a_exp);
    if (parts.oscillatory && abs(parts.oscillatory_factor) <= Real(0.1)) {
        c.absolute_mode = true;
        Complex ratio = to_complex(logc_div(c.direct, parts.envelope));
        c.rel_dev = abs(ratio - Complex(parts.oscillatory_factor));
    } else {
        c.rel_dev = logc_rel_dev(c.direct, c.main_term);
    }
    return c;
}

// Least-squares slope of ys against xs.
inline Real least_squares_slope(const std::vector<Real>& xs, const std::vector<Real>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("slope fit needs matching samples (>= 2)");
    Real n(static_cast<long>(xs.size()));
    Real mx(0), my(0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    Real sxy(0), sxx(0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Real dx = xs[i] - mx;
        sxy += dx * (ys[i] - my);
        sxx += dx * dx;
    }
    if (sxx.is_zero()) throw DomainError("slope fit needs distinct abscissae");
    return sxy / sxx;
}

struct RateFit {
    std::vector<long> n;
    std::vector<Real> x;            // n^a
    std::vector<Real> log_rel_dev;  // ln rel_dev
    std::vector<AsymptoticComparison> comparisons;
    Real slope;
};

struct LimitParams {
    Real nu{0.5};
    Real alpha{0.5};
};

inline RateFit rate_fit_detail(ScaledLimit l, const Real& a_exp, const Real& u, const std::vector<long>& n_list,
                               const PrecisionContext& ctx, const LimitParams& params = {}) {
    if (n_list.size() < 3) throw DomainError("rate fit needs at least three n values");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw DomainError("rate fit n values must be ascending");
    RateFit fit;
    for (long n : n_list) {
        try {
            ScaledRegime r = ScaledRegime::for_limit(l, n, a_exp, u, params.nu, params.alpha);
            AsymptoticComparison c = compare_asymptotic(l, r, ctx);
            ScopedPrecision sp(ctx.working_bits());
            if (c.rel_dev.is_zero()) throw DomainError("deviation vanished; the slope is undefined");
            fit.n.push_back(n);
            fit.x.push_back(pow(Real(n), a_exp));
            fit.log_rel_dev.push_back(log(c.rel_dev));
            fit.comparisons.push_back(std::move(c));
        } catch (const ConfigurationError& e) {
            throw ConfigurationError("at n = " + std::to_string(n) + ": " + e.what());
        } catch (const ResourceError& e) {
            throw ResourceError("at n = " + std::to_string(n) + ": " + e.what());
        } catch (const DomainError& e) {
            throw DomainError("at n = " + std::to_string(n) + ": " + e.what());
        }
    }
    ScopedPrecision sp(ctx.working_bits());
    fit.slope = least_squares_slope(fit.x, fit.log_rel_dev);
    return fit;
}

// Least-squares slope of ln(rel_dev) against n^a.
inline Real rate_fit(ScaledLimit l, const Real& a_exp, const Real& u, const std::vector<long>& n_list,
                     const PrecisionContext& ctx, const LimitParams& params = {}) {
    return rate_fit_detail(l, a_exp, u, n_list, ctx, params).slope;
}

}  // namespace qscaled
