#pragma once

#include "qscaled/qseries_base.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace qscaled {

struct ModularPoint {
    Complex v;
    Complex tau;

    ModularPoint(Complex v_, Complex tau_) : v(std::move(v_)), tau(std::move(tau_)) {
        if (!(tau.im > Real(0))) throw DomainError("Im(tau) must be positive");
    }
};

struct EtaAsymptoticReport {
    Real gamma;
    Real a_exp;
    long n = 0;
    LogComplex direct;
    LogComplex main_term;
    Real rel_dev;
    Real envelope;
};

namespace detail {

inline void check_kind(int kind) {
    if (kind < 1 || kind > 4) throw DomainError("theta kind must be 1, 2, 3 or 4");
}

// Sum over k of sign_k * exp(pi i tau (k+c)^2 + 2 pi i (k+c) v), with c = 1/2 for
// kinds 1, 2 and c = 0 for kinds 3, 4; kind 1 carries the extra factor -i.
inline Measured<LogComplex> theta_series_once(int kind, const Complex& v, const Complex& tau,
                                              const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    const bool half = (kind == 1 || kind == 2);
    const bool alternating = (kind == 1 || kind == 4);
    const Real c = half ? Real(0.5) : Real(0);
    const Real pi = Real::pi();
    const Real ln2 = Real::ln2();

    // log|term| = -pi (Im tau (k+c)^2 + 2 (k+c) Im v), maximal at k+c = -Im v / Im tau.
    Real centre = -(v.im / tau.im);
    Real spread = sqrt(Real(ctx.working_bits() + 24) * ln2 / (pi * tau.im));
    long lo = (floor(centre - c - spread) - Real(1)).to_long();
    long hi = (ceil(centre - c + spread) + Real(1)).to_long();
    if (hi - lo + 1 > ctx.max_terms()) throw ResourceError("theta series exceeds max_terms");

    std::vector<LogTerm> terms;
    terms.reserve(static_cast<std::size_t>(hi - lo + 1));
    const long wide = ctx.working_bits() + 64;
    for (long k = lo; k <= hi; ++k) {
        Real kc, lm, ph;
        {
            // The phase argument is formed exactly before reduction modulo 2.
            ScopedPrecision exact(wide);
            kc = Real(k) + c;
            Real kc2 = kc * kc;
            lm = -(tau.im * kc2 + ldexp(kc * v.im, 1));
            ph = tau.re * kc2 + ldexp(kc * v.re, 1);
            if (alternating && (k % 2 != 0)) ph = ph + Real(1);
            if (kind == 1) ph = ph - Real(0.5);
            ph = reduce_mod2(ph);
        }
        terms.push_back({pi * lm, unit_pi(ph)});
    }
    return measured_log_sum(terms);
}

inline bool theta_trivially_zero(int kind, const Complex& v) {
    if (!v.im.is_zero()) return false;
    if (kind == 1) return v.re.is_integer();
    if (kind == 2) return (v.re - Real(0.5)).is_integer();
    return false;
}

}  // namespace detail

// Defining series evaluated directly at (v, tau), without any transformation.
inline LogComplex theta_series_log(int kind, const Complex& v, const Complex& tau, const PrecisionContext& ctx) {
    detail::check_kind(kind);
    if (!(tau.im > Real(0))) throw DomainError("Im(tau) must be positive");
    if (detail::theta_trivially_zero(kind, v)) return LogComplex::zero();
    return with_cancellation_control(
        ctx, [&](const PrecisionContext& c) { return detail::theta_series_once(kind, v, tau, c); });
}

inline Complex theta_series(int kind, const Complex& v, const Complex& tau, const PrecisionContext& ctx) {
    LogComplex r = theta_series_log(kind, v, tau, ctx);
    ScopedPrecision sp(ctx.working_bits());
    return to_complex(r);
}

// theta_kind(v|tau). For Im tau < 1/2 the point is first moved by tau -> tau - m
// and tau -> -1/tau until Im tau >= 1/2.
inline Complex theta(int kind, const ModularPoint& p, const PrecisionContext& ctx) {
    detail::check_kind(kind);
    ScopedPrecision sp(ctx.working_bits());
    Complex v = p.v, tau = p.tau;
    LogComplex factor = LogComplex::one();
    const Real half(0.5);
    for (int guard = 0; guard < 200; ++guard) {
        Real m = round(tau.re);
        if (!m.is_zero()) {
            tau.re = tau.re - m;
            long mm = m.to_long();
            if (kind == 1 || kind == 2) {
                // theta_{1,2}(v|tau) = e^{i pi m / 4} theta_{1,2}(v|tau - m)
                factor = logc_mul(factor, logc_unit_pi(Real(mm % 8) / Real(4)));
            } else if (mm % 2 != 0) {
                kind = (kind == 3) ? 4 : 3;
            }
        }
        if (tau.im >= half) break;
        // theta_j(v|tau) = s_j sqrt(tau'/i) e^{-pi i v^2/tau} theta_{sigma(j)}(v/tau | tau'), tau' = -1/tau
        Complex tau_p = Complex(-1) / tau;
        Complex v_p = v / tau;
        Complex root = sqrt(tau_p / Complex::i());
        Complex w = Complex(Real(0), -Real::pi()) * (v * v) / tau;
        LogComplex f = logc_mul(logc_from_complex(root), logc_exp(w));
        if (kind == 1) f = logc_mul(f, logc_unit_pi(half));
        factor = logc_mul(factor, f);
        if (kind == 2)
            kind = 4;
        else if (kind == 4)
            kind = 2;
        v = v_p;
        tau = tau_p;
    }
    LogComplex s = theta_series_log(kind, v, tau, ctx);
    return to_complex(logc_mul(factor, s));
}

inline Complex theta(int kind, const Complex& v, const Complex& tau, const PrecisionContext& ctx) {
    return theta(kind, ModularPoint(v, tau), ctx);
}

// (z; q) calling convention: z = e^{2 pi i v} with Re v in (-1/2, 1/2], q = e^{pi i tau}.
inline Complex theta_z(int kind, const Complex& z, const QPoint& qp, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    if (z.is_zero()) throw DomainError("theta in z-notation needs z != 0");
    Complex lz = log(z);
    Real two_pi = ldexp(Real::pi(), 1);
    Complex v(lz.im / two_pi, -(lz.re / two_pi));
    return theta(kind, ModularPoint(v, qp.tau()), ctx);
}

// Product form with nome q^2 = e^{2 pi i tau}.
inline Complex theta_triple_product(int kind, const ModularPoint& p, const PrecisionContext& ctx) {
    detail::check_kind(kind);
    PrecisionContext wide = ctx.with_precision(ctx.precision_bits() + 16);
    ScopedPrecision sp(wide.working_bits());
    const Real pi = Real::pi();
    Complex i_pi_tau = Complex(Real(0), pi) * p.tau;
    Complex q2 = exp(Complex(ldexp(i_pi_tau.re, 1), ldexp(i_pi_tau.im, 1)));
    Complex e2v = exp(Complex(Real(0), ldexp(pi, 1)) * p.v);
    Complex e2vm = Complex(1) / e2v;
    Complex base = qpoch_infinite_nome(q2, q2, wide);
    if (kind == 1 || kind == 2) {
        Complex pre = ldexp(Real(1), 1) * exp(i_pi_tau / Complex(4));
        Complex sc = (kind == 1) ? sin_pi(p.v) : cos_pi(p.v);
        if (sc.is_zero()) return Complex(0);
        Complex s = (kind == 1) ? Complex(1) : Complex(-1);
        Complex a = qpoch_infinite_nome(s * q2 * e2v, q2, wide);
        Complex b = qpoch_infinite_nome(s * q2 * e2vm, q2, wide);
        return pre * sc * base * a * b;
    }
    Complex qn = exp(i_pi_tau);
    Complex s = (kind == 3) ? Complex(-1) : Complex(1);
    Complex a = qpoch_infinite_nome(s * qn * e2v, q2, wide);
    Complex b = qpoch_infinite_nome(s * qn * e2vm, q2, wide);
    return base * a * b;
}

// theta_kind(v/tau | -1/tau) from the transformation formula: the prefactor
// sqrt(tau/i) e^{pi i v^2/tau} (times -i for kind 1) times theta_{sigma(kind)}(v|tau),
// the latter summed directly from its series at the original point.
inline Complex theta_modular(int kind, const ModularPoint& p, const PrecisionContext& ctx) {
    detail::check_kind(kind);
    static constexpr int sigma[5] = {0, 1, 4, 3, 2};
    LogComplex s = theta_series_log(sigma[kind], p.v, p.tau, ctx);
    ScopedPrecision sp(ctx.working_bits());
    Complex root = sqrt(p.tau / Complex::i());
    Complex w = Complex(Real(0), Real::pi()) * (p.v * p.v) / p.tau;
    LogComplex f = logc_mul(logc_from_complex(root), logc_exp(w));
    if (kind == 1) f = logc_mul(f, logc_unit_pi(Real(-0.5)));
    return to_complex(logc_mul(f, s));
}

// e^{pi i tau/12} prod_{k>=1} (1 - e^{2 pi i k tau}), evaluated directly.
inline Complex eta_product(const Complex& tau, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    if (!(tau.im > Real(0))) throw DomainError("Im(tau) must be positive");
    Complex ipt = Complex(Real(0), Real::pi()) * tau;
    Complex q2 = exp(Complex(ldexp(ipt.re, 1), ldexp(ipt.im, 1)));
    return exp(ipt / Complex(12)) * qpoch_infinite_nome(q2, q2, ctx);
}

// Dedekind eta; below Im tau = 1 the point is moved by tau -> tau - m, tau -> -1/tau first.
inline LogComplex dedekind_eta_log(const Complex& tau_in, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    if (!(tau_in.im > Real(0))) throw DomainError("Im(tau) must be positive");
    Complex tau = tau_in;
    LogComplex factor = LogComplex::one();
    for (int guard = 0; guard < 200 && tau.im < Real(1); ++guard) {
        Real m = round(tau.re);
        if (!m.is_zero()) {
            tau.re = tau.re - m;
            // eta(tau) = e^{i pi m/12} eta(tau - m)
            factor = logc_mul(factor, logc_unit_pi(Real(m.to_long() % 24) / Real(12)));
        }
        if (norm(tau) >= Real(1)) break;
        // eta(tau) = eta(-1/tau) / sqrt(tau/i)
        Complex root = sqrt(tau / Complex::i());
        factor = logc_mul(factor, logc_inv(logc_from_complex(root)));
        tau = Complex(-1) / tau;
    }
    return logc_mul(factor, logc_from_complex(eta_product(tau, ctx)));
}

inline Complex dedekind_eta(const Complex& tau, const PrecisionContext& ctx) {
    LogComplex r = dedekind_eta_log(tau, ctx);
    ScopedPrecision sp(ctx.working_bits());
    return to_complex(r);
}

// (q;q)_inf at q = e^{-2 pi/(gamma n^a)} against sqrt(gamma n^a) exp{(pi/12)((gamma n^a)^{-1} - gamma n^a)}.
inline EtaAsymptoticReport qq_infinity_scaled(const Real& gamma, const Real& a_exp, long n,
                                              const PrecisionContext& ctx) {
    if (!(a_exp > Real(0) && a_exp < Real(1))) throw DomainError("a_exp must lie in (0, 1)");
    if (!(gamma > Real(0))) throw DomainError("gamma must be positive");
    if (n < 1) throw DomainError("n must be positive");
    ScopedPrecision sp(ctx.working_bits());
    EtaAsymptoticReport rep;
    rep.gamma = gamma;
    rep.a_exp = a_exp;
    rep.n = n;
    const Real pi = Real::pi();
    Real X = gamma * pow(Real(n), a_exp);
    // (q;q)_inf = e^{-pi i tau/12} eta(tau) with tau = i/X
    Complex tau(Real(0), Real(1) / X);
    rep.direct = logc_mul(LogComplex(pi / (Real(12) * X), Real(0)), dedekind_eta_log(tau, ctx));
    rep.main_term = LogComplex(ldexp(log(X), -1) + pi / Real(12) * (Real(1) / X - X), Real(0));
    rep.rel_dev = logc_rel_dev(rep.direct, rep.main_term);
    rep.envelope = exp(-ldexp(pi, 1) * X);
    return rep;
}

}  // namespace qscaled
