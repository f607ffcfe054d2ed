#pragma once

// Brute-force reference evaluations. Plain complex sums and products in
// defining order, no log domain, no peak centring, no modular reduction.
// Callers set the precision with ScopedPrecision (typically 512 bits or more).

#include "qscaled/mp_real.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

using qscaled::Complex;
using qscaled::Real;

inline Real tiny() { return Real::pow2(-static_cast<long>(qscaled::working_precision()) - 20); }

// prod_{k=0}^{n-1} (1 - a q^k)
inline Complex qpoch(const Complex& a, const Real& q, long n) {
    Complex p(1), t = a;
    for (long k = 0; k < n; ++k) {
        p = p * (Complex(1) - t);
        t = t * q;
    }
    return p;
}

// prod_{k>=0} (1 - a q^k), stopped once |a q^k| < 2^{-prec-20} * (1-q)
inline Complex qpoch_inf(const Complex& a, const Real& q) {
    Complex p(1), t = a;
    Real stop = tiny() * (Real(1) - q);
    while (abs(t) >= stop) {
        p = p * (Complex(1) - t);
        t = t * q;
    }
    return p;
}

inline Complex euler_Eq(const Complex& z, const Real& q) { return qpoch_inf(-z, q); }

inline Complex q_gamma(const Real& x, const Real& q) {
    Complex num = qpoch_inf(Complex(q), q);
    Complex den = qpoch_inf(Complex(pow(q, x)), q);
    return num / den * Complex(exp((Real(1) - x) * log(Real(1) - q)));
}

// sum_k q^{k^2} (-z)^k / (q;q)_k, with the terms built recursively
inline Complex ramanujan_Aq(const Complex& z, const Real& q) {
    // terms grow until q^{2k} |z| < 1
    long peak = static_cast<long>(std::max(0.0, std::log(std::max(1.0, abs(z).to_double())) / (-2.0 * std::log(q.to_double())))) + 2;
    Complex t(1), s(1);
    for (long k = 1;; ++k) {
        t = t * (-z) * pow(q, 2 * k - 1) / (Real(1) - pow(q, k));
        s = s + t;
        if (k > peak && abs(t) <= tiny() * abs(s)) return s;
    }
}

// (q^{nu+1};q)_inf/(q;q)_inf sum_k (-1)^k (z/2)^{nu+2k} q^{k(nu+k)} / ((q;q)_k (q^{nu+1};q)_k)
inline Complex jackson_J2(const Complex& z, const Real& nu, const Real& q) {
    Complex h = z / Complex(2);
    Complex base = h.is_zero() ? Complex(nu.is_zero() ? Real(1) : Real(0)) : pow(h, nu);
    Real qn1 = pow(q, nu + Real(1));
    Complex pre = qpoch_inf(Complex(qn1), q) / qpoch_inf(Complex(q), q);
    long peak = static_cast<long>(std::max(0.0, std::log(std::max(1.0, abs(h * h).to_double())) /
                                                    (-2.0 * std::log(q.to_double())))) + 2;
    Complex t = base, s = base;
    Complex h2 = h * h;
    for (long k = 1;; ++k) {
        Real qk = pow(q, k);
        t = t * (-h2) * pow(q, nu + Real(2 * k - 1)) / ((Real(1) - qk) * (Real(1) - qn1 * pow(q, k - 1)));
        s = s + t;
        if (k > peak && abs(t) <= tiny() * (abs(s) + abs(base))) return pre * s;
    }
}

// sum_{k=0}^n q^{k^2} (-x)^k / ((q;q)_k (q;q)_{n-k})
inline Complex stieltjes_wigert(const Complex& x, long n, const Real& q) {
    Complex s(0);
    Complex xk(1);
    for (long k = 0; k <= n; ++k) {
        s = s + pow(q, k * k) * xk / (qpoch(Complex(q), q, k) * qpoch(Complex(q), q, n - k));
        xk = xk * (-x);
    }
    return s;
}

// (q^{a+1};q)_n sum_k q^{k^2+ak} (-x)^k / ((q;q)_k (q;q)_{n-k} (q^{a+1};q)_k)
inline Complex q_laguerre(const Complex& x, long n, const Real& alpha, const Real& q) {
    Complex qa1(pow(q, alpha + Real(1)));
    Complex s(0);
    Complex xk(1);
    for (long k = 0; k <= n; ++k) {
        Real kk(k);
        Complex num = Complex(pow(q, kk * kk + alpha * kk)) * xk;
        s = s + num / (qpoch(Complex(q), q, k) * qpoch(Complex(q), q, n - k) * qpoch(qa1, q, k));
        xk = xk * (-x);
    }
    return qpoch(qa1, q, n) * s;
}

// Defining series of the Jacobi theta functions, q = e^{pi i tau}, summed over |k| <= K.
inline Complex theta(int kind, const Complex& v, const Complex& tau, long K) {
    const Real pi = Real::pi();
    const bool half = kind == 1 || kind == 2;
    const bool alt = kind == 1 || kind == 4;
    Complex s(0);
    for (long k = -K; k <= K; ++k) {
        Real m = half ? Real(k) + Real(0.5) : Real(k);
        Complex e = Complex(Real(0), pi) * (tau * Complex(m * m) + Complex(Real(2) * m) * v);
        Complex t = exp(e);
        if (alt && (k % 2 != 0)) t = -t;
        s = s + t;
    }
    if (kind == 1) s = s * Complex(Real(0), Real(-1));
    return s;
}

// e^{pi i tau/12} prod_{k>=1} (1 - e^{2 pi i k tau})
inline Complex dedekind_eta(const Complex& tau) {
    const Real pi = Real::pi();
    Complex q2 = exp(Complex(Real(0), Real(2) * pi) * tau);
    Real stop = tiny() * (Real(1) - abs(q2));
    Complex p(1), t = q2;
    while (abs(t) >= stop) {
        p = p * (Complex(1) - t);
        t = t * q2;
    }
    return exp(Complex(Real(0), pi) * tau / Complex(12)) * p;
}

}  // namespace oracle
