#pragma once

#include "qscaled/core_numerics.hpp"
#include "qscaled/summation.hpp"

#include <string>
#include <vector>

namespace qscaled {

// Real nome q in (0,1) together with ln q and tau, where q = e^{pi i tau}.
class QPoint {
public:
    explicit QPoint(const Real& q) : q_(q), log_q_(0), tau_() {
        if (!(q > Real(0) && q < Real(1)))
            throw DomainError("nome q must lie in (0, 1), got " + q.to_string(6));
        log_q_ = log(q_);
        tau_ = Complex(Real(0), -log_q_ / Real::pi());
    }
    QPoint(double q) : QPoint(Real(q)) {}

    // q = e^{log_q}, for nomes given through their logarithm.
    static QPoint from_log(const Real& log_q) {
        if (!(log_q < Real(0))) throw DomainError("ln q must be negative");
        QPoint p(exp(log_q));
        p.log_q_ = log_q;
        p.tau_ = Complex(Real(0), -log_q / Real::pi());
        return p;
    }

    const Real& q() const { return q_; }
    const Real& log_q() const { return log_q_; }
    const Complex& tau() const { return tau_; }
    // q^x = e^{x ln q}
    Real pow(const Real& x) const { return exp(x * log_q_); }

private:
    Real q_;
    Real log_q_;
    Complex tau_;
};

struct RemainderReport {
    Complex value;
    Real bound;
    bool satisfied = false;
};

struct QPochResult {
    Complex value;
    bool exact_zero = false;
    bool near_zero = false;  // some factor fell below 2^{-precision_bits}
    long terms = 0;
};

// (a;q)_n for integer n >= 0.
inline Complex qpoch_finite(const Complex& a, const QPoint& qp, long n) {
    if (n < 0) throw DomainError("qpoch_finite: n must be nonnegative");
    Complex prod(1);
    if (a.is_zero()) return prod;
    Complex aqk = a;
    for (long k = 0; k < n; ++k) {
        prod = prod * (Complex(1) - aqk);
        aqk = aqk * qp.q();
    }
    return prod;
}

namespace detail {

// Number of factors K with |a||q|^K < 2^{-bits}(1-|q|).
inline long qpoch_truncation(const Real& abs_a, const Real& abs_q, const PrecisionContext& ctx) {
    if (abs_a.is_zero()) return 0;
    Real lq = log(abs_q);
    Real target = log(abs_a) + Real(ctx.working_bits()) * Real::ln2() - log(Real(1) - abs_q);
    Real k = ceil(target / (-lq));
    if (k < Real(0)) return 0;
    if (k > Real(ctx.max_terms()))
        throw ResourceError("infinite product needs more than max_terms = " + std::to_string(ctx.max_terms()) +
                            " factors");
    return k.to_long() + 1;
}

inline QPochResult qpoch_nome(const Complex& a, const Complex& nome, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    QPochResult r;
    r.value = Complex(1);
    if (a.is_zero()) return r;
    long K = qpoch_truncation(abs(a), abs(nome), ctx);
    r.terms = K;
    Real tiny = ctx.epsilon();
    Complex aqk = a;
    Complex prod(1);
    for (long k = 0; k < K; ++k) {
        Complex f = Complex(1) - aqk;
        if (f.is_zero()) {
            r.value = Complex(0);
            r.exact_zero = true;
            return r;
        }
        if (abs(f) < tiny) r.near_zero = true;
        prod = prod * f;
        aqk = aqk * nome;
    }
    r.value = prod;
    return r;
}

}  // namespace detail

inline QPochResult qpoch_infinite_ex(const Complex& a, const QPoint& qp, const PrecisionContext& ctx) {
    return detail::qpoch_nome(a, Complex(qp.q()), ctx);
}

// (a;q)_inf truncated by the remainder bound |a|q^K/(1-q).
inline Complex qpoch_infinite(const Complex& a, const QPoint& qp, const PrecisionContext& ctx) {
    return qpoch_infinite_ex(a, qp, ctx).value;
}

// (a;p)_inf for a complex nome p with |p| < 1.
inline Complex qpoch_infinite_nome(const Complex& a, const Complex& p, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    if (!(abs(p) < Real(1))) throw DomainError("complex nome must satisfy |p| < 1");
    return detail::qpoch_nome(a, p, ctx).value;
}

// (a;q)_inf in the log domain. Factors with |a q^k| > 1 are split off and
// accumulated as logarithms, so arguments like e^{1000} are fine.
inline LogComplex log_qpoch_infinite(const Complex& a, const QPoint& qp, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    if (a.is_zero()) return LogComplex::one();
    Real la = log(abs(a));
    long m = 0;
    if (la > Real(0)) {
        Real mm = floor(la / (-qp.log_q())) + Real(1);
        if (mm > Real(ctx.max_terms())) throw ResourceError("log-domain product exceeds max_terms");
        m = mm.to_long();
    }
    LogProduct prod;
    Complex aqk = a;
    for (long k = 0; k < m; ++k) {
        prod.mul(Complex(1) - aqk);
        if (prod.is_zero()) return LogComplex::zero();
        aqk = aqk * qp.q();
    }
    auto tail = detail::qpoch_nome(aqk, Complex(qp.q()), ctx);
    if (tail.exact_zero) return LogComplex::zero();
    prod.mul(tail.value);
    return prod.value();
}

// ln (q;q)_k for k = 0..n, cumulative.
inline std::vector<Real> log_qq_prefix(const QPoint& qp, long n) {
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(Real(0));
    Real qk = qp.q();
    for (long k = 1; k <= n; ++k) {
        out.push_back(out.back() + log1p(-qk));
        qk = qk * qp.q();
    }
    return out;
}

// ln (q^s;q)_k for k = 0..n with q^s in (0,1), cumulative.
inline std::vector<Real> log_qpoch_prefix(const Real& qs, const QPoint& qp, long n) {
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    out.push_back(Real(0));
    Real x = qs;
    for (long k = 1; k <= n; ++k) {
        out.push_back(out.back() + log1p(-x));
        x = x * qp.q();
    }
    return out;
}

namespace detail {

inline Real remainder_bound(const Complex& a, const QPoint& qp, long n) {
    return ldexp(abs(a) * pow(qp.q(), n), 1) / (Real(1) - qp.q());
}

inline void check_remainder_pre(const Complex& a, const QPoint& qp, long n) {
    if (n < 1) throw DomainError("remainder index n must be positive");
    Real lhs = abs(a) * pow(qp.q(), n) / (Real(1) - qp.q());
    if (!(lhs < Real(0.5)))
        throw DomainError("remainder precondition |a| q^n / (1-q) < 1/2 violated (value " + lhs.to_string(6) +
                          ")");
}

// sum_{k>=1} c_k b^k where c_{k}/c_{k-1} = step(k); stops on the tail bound.
template <class Step>
Measured<Complex> remainder_series(const Complex& b, const QPoint& qp, const PrecisionContext& ctx, Step step) {
    ScopedPrecision sp(ctx.working_bits());
    std::vector<Complex> terms;
    Real ab = abs(b);
    Real tol = ldexp(ab, -static_cast<long>(ctx.working_bits()) - 2);
    // (q;q)_inf lower bound for the tail: 1/(q;q)_k <= 1/(q;q)_inf
    Real qq = abs(detail::qpoch_nome(Complex(qp.q()), Complex(qp.q()), ctx).value);
    Complex t(1);
    Real abk(1);
    for (long k = 1;; ++k) {
        if (k > ctx.max_terms()) throw ResourceError("remainder series exceeds max_terms");
        t = t * step(k);
        terms.push_back(t);
        abk = abk * ab;
        Real tail = abk * ab / (qq * (Real(1) - ab));
        if (tail < tol) break;
    }
    return measured_sum(terms);
}

}  // namespace detail

// r1(a;n) = (a q^n; q)_inf - 1 with the certified bound 2|a|q^n/(1-q).
inline RemainderReport remainder_r1(const Complex& a, const QPoint& qp, long n, const PrecisionContext& ctx) {
    detail::check_remainder_pre(a, qp, n);
    ScopedPrecision sp(ctx.working_bits());
    RemainderReport rep;
    rep.bound = detail::remainder_bound(a, qp, n);
    if (a.is_zero()) {
        rep.value = Complex(0);
        rep.satisfied = true;
        return rep;
    }
    rep.value = with_cancellation_control(ctx, [&](const PrecisionContext& c) {
        ScopedPrecision inner(c.working_bits());
        Complex b = a * pow(qp.q(), n);
        // Euler expansion: (b;q)_inf - 1 = sum_{k>=1} q^{k(k-1)/2} (-b)^k / (q;q)_k
        return detail::remainder_series(b, qp, c, [&](long k) {
            Real qk1 = pow(qp.q(), k - 1);
            return (-b) * qk1 / (Real(1) - qk1 * qp.q());
        });
    });
    rep.satisfied = abs(rep.value) <= rep.bound;
    return rep;
}

// r2(a;n) = 1/(a q^n; q)_inf - 1 with the same bound.
inline RemainderReport remainder_r2(const Complex& a, const QPoint& qp, long n, const PrecisionContext& ctx) {
    detail::check_remainder_pre(a, qp, n);
    ScopedPrecision sp(ctx.working_bits());
    RemainderReport rep;
    rep.bound = detail::remainder_bound(a, qp, n);
    if (a.is_zero()) {
        rep.value = Complex(0);
        rep.satisfied = true;
        return rep;
    }
    Complex b = a * pow(qp.q(), n);
    if (detail::qpoch_nome(b, Complex(qp.q()), ctx).exact_zero)
        throw SingularityError("(a q^n; q)_inf vanishes");
    rep.value = with_cancellation_control(ctx, [&](const PrecisionContext& c) {
        ScopedPrecision inner(c.working_bits());
        Complex bb = a * pow(qp.q(), n);
        // 1/(b;q)_inf - 1 = sum_{k>=1} b^k / (q;q)_k
        return detail::remainder_series(bb, qp, c, [&](long k) {
            return bb / (Real(1) - pow(qp.q(), k));
        });
    });
    rep.satisfied = abs(rep.value) <= rep.bound;
    return rep;
}

// sum_k (a;q)_k / (q;q)_k z^k for |z| < 1.
inline Complex qbinomial_series(const Complex& a, const Complex& z, const QPoint& qp, const PrecisionContext& ctx) {
    {
        ScopedPrecision sp(ctx.working_bits());
        if (!(abs(z) < Real(1))) throw DomainError("q-binomial series needs |z| < 1");
        if (z.is_zero()) return Complex(1);
    }
    return with_cancellation_control(ctx, [&](const PrecisionContext& c) {
        ScopedPrecision sp(c.working_bits());
        Real tol = Real::pow2(-c.working_bits());
        Real az = abs(z), aa = abs(a);
        std::vector<Complex> terms;
        Complex t(1);
        Real qk(1);  // q^k
        Real peak(1);
        terms.push_back(t);
        for (long k = 0;; ++k) {
            if (k + 1 > c.max_terms()) throw ResourceError("q-binomial series exceeds max_terms");
            Real qk1 = qk * qp.q();
            t = t * ((Complex(1) - a * qk) / (Real(1) - qk1)) * z;
            terms.push_back(t);
            Real at = abs(t);
            if (at > peak) peak = at;
            // ratio bound for all later terms
            Real r = az * (Real(1) + aa * qk1) / (Real(1) - qk1 * qp.q());
            if (r < Real(1) && at * r / (Real(1) - r) < tol * peak) break;
            qk = qk1;
        }
        return measured_sum(terms);
    });
}

// sum_k q^{k(k-1)/2} (-z)^k / (q;q)_k, which equals (z;q)_inf.
inline Complex euler_series(const Complex& z, const QPoint& qp, const PrecisionContext& ctx) {
    if (z.is_zero()) return Complex(1);
    return with_cancellation_control(ctx, [&](const PrecisionContext& c) {
        ScopedPrecision sp(c.working_bits());
        Real tol = Real::pow2(-c.working_bits());
        Real az = abs(z);
        std::vector<Complex> terms;
        Complex t(1);
        Real qk(1);
        Real peak(1);
        terms.push_back(t);
        for (long k = 0;; ++k) {
            if (k + 1 > c.max_terms()) throw ResourceError("Euler series exceeds max_terms");
            Real qk1 = qk * qp.q();
            t = t * (-z) * (qk / (Real(1) - qk1));
            terms.push_back(t);
            Real at = abs(t);
            if (at > peak) peak = at;
            Real r = az * qk1 / (Real(1) - qk1 * qp.q());
            if (r < Real(0.5) && ldexp(at, 1) < tol * peak) break;
            qk = qk1;
        }
        return measured_sum(terms);
    });
}

// Parity n - 2 floor(n/2).
inline int chi(long n) {
    if (n < 1) throw DomainError("chi is defined for positive n");
    return static_cast<int>(n % 2);
}

}  // namespace qscaled
