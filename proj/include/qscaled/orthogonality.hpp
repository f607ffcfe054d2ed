#pragma once

#include "qscaled/qfunctions.hpp"
#include "qscaled/quadrature.hpp"

#include <string>
#include <vector>

namespace qscaled {

enum class PolynomialFamily { stieltjes_wigert, q_laguerre };

struct OrthogonalityEntry {
    long m = 0;
    long n = 0;
    Real integral;
    Real expected;  // 0 off the diagonal
    Real scale;     // diagonal scale sqrt(h_m h_n)
    Real deviation; // relative (diagonal) or scaled (off-diagonal) error
    bool pass = false;
};

struct OrthogonalityReport {
    PolynomialFamily family = PolynomialFamily::stieltjes_wigert;
    Real q;
    Real alpha;
    long max_degree = 0;
    Real tolerance;
    std::vector<OrthogonalityEntry> entries;
    bool converged = false;
    bool pass = false;
};

// Squared norm h_n: q^{-n}/(q;q)_n for Stieltjes-Wigert, (q^{a+1};q)_n/(q^n (q;q)_n) for q-Laguerre.
inline Real orthogonality_norm(PolynomialFamily fam, long n, const QPoint& qp, const Real& alpha) {
    Real l = -Real(n) * qp.log_q() - log_qq_prefix(qp, n)[static_cast<std::size_t>(n)];
    if (fam == PolynomialFamily::q_laguerre)
        l += log_qpoch_prefix(qp.pow(alpha + Real(1)), qp, n)[static_cast<std::size_t>(n)];
    return exp(l);
}

// Integrates P_m P_n w over (0, inf) for m <= n <= max_degree using x = e^t and
// tanh-sinh on both sides of the integrand's peak.
inline OrthogonalityReport check_orthogonality(PolynomialFamily fam, const QPoint& qp, const Real& alpha,
                                               long max_degree, const PrecisionContext& ctx,
                                               const Real& tolerance = Real(1e-8), int jobs = 1) {
    if (max_degree < 0) throw DomainError("max_degree must be nonnegative");
    ScopedPrecision sp(ctx.working_bits());
    OrthogonalityReport rep;
    rep.family = fam;
    rep.q = qp.q();
    rep.alpha = alpha;
    rep.max_degree = max_degree;
    rep.tolerance = tolerance;
    const long M = max_degree;

    auto log_weight = [&](const Real& x) {
        return fam == PolynomialFamily::stieltjes_wigert ? weight_sw(x, qp).log_value
                                                         : weight_qlaguerre(x, alpha, qp, ctx).log_value;
    };
    auto poly = [&](const Real& x, long k) {
        LogComplex v = fam == PolynomialFamily::stieltjes_wigert
                           ? stieltjes_wigert(Complex(x), k, qp, ctx)
                           : q_laguerre(Complex(x), PolynomialSpec(k, alpha), qp, ctx);
        return v;
    };
    // log of max_k P_k(x)^2 w(x) x at x = e^t; bounds every product by Cauchy-Schwarz
    auto log_envelope = [&](const Real& t) {
        Real x = exp(t);
        Real best = Real::inf(-1);
        for (long k = 0; k <= M; ++k) {
            LogComplex p = poly(x, k);
            if (p.is_zero()) continue;
            Real v = ldexp(p.log_mag, 1);
            if (v > best) best = v;
        }
        return best + log_weight(x) + t;
    };
    Window win = scan_window(log_envelope, Real(ctx.working_bits() + 16) * Real::ln2());

    std::vector<std::pair<long, long>> pairs;
    for (long m = 0; m <= M; ++m)
        for (long n = m; n <= M; ++n) pairs.emplace_back(m, n);

    VectorIntegrand f = [&](const Real& t, std::vector<Real>& out) {
        Real x = exp(t);
        Real lw = log_weight(x) + t;
        std::vector<Real> p;
        for (long k = 0; k <= M; ++k) p.push_back(to_complex(poly(x, k)).re);
        Real w = exp(lw);
        for (std::size_t i = 0; i < pairs.size(); ++i)
            out[i] = p[static_cast<std::size_t>(pairs[i].first)] * p[static_cast<std::size_t>(pairs[i].second)] * w;
    };
    Real tol = Real::pow2(-std::min<long>(ctx.precision_bits() / 2, 100));
    auto left = tanh_sinh(f, win.lo, win.peak, pairs.size(), ctx, tol, 14, jobs);
    auto right = tanh_sinh(f, win.peak, win.hi, pairs.size(), ctx, tol, 14, jobs);
    rep.converged = left.converged && right.converged;

    std::vector<Real> h;
    for (long k = 0; k <= M; ++k) h.push_back(orthogonality_norm(fam, k, qp, alpha));
    rep.pass = rep.converged;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        OrthogonalityEntry e;
        e.m = pairs[i].first;
        e.n = pairs[i].second;
        e.integral = left.values[i] + right.values[i];
        e.scale = sqrt(h[static_cast<std::size_t>(e.m)] * h[static_cast<std::size_t>(e.n)]);
        e.expected = e.m == e.n ? h[static_cast<std::size_t>(e.m)] : Real(0);
        e.deviation = abs(e.integral - e.expected) / e.scale;
        e.pass = e.deviation <= tolerance;
        rep.pass = rep.pass && e.pass;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

}  // namespace qscaled
