#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace qscaled {

namespace detail {
inline thread_local mpfr_prec_t working_prec = 288;
}

// Precision (bits) used for newly created values on the calling thread.
inline mpfr_prec_t working_precision() noexcept { return detail::working_prec; }

class ScopedPrecision {
public:
    explicit ScopedPrecision(long bits) : prev_(detail::working_prec) {
        detail::working_prec = static_cast<mpfr_prec_t>(bits);
    }
    ~ScopedPrecision() { detail::working_prec = prev_; }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    mpfr_prec_t prev_;
};

// RAII wrapper over mpfr_t. Arithmetic results are rounded to the working
// precision of the thread; copies keep the precision of their source.
class Real {
public:
    Real() {
        mpfr_init2(v_, detail::working_prec);
        mpfr_set_zero(v_, 1);
    }
    Real(int x) { init_si(x); }
    Real(long x) { init_si(x); }
    Real(long long x) { init_si(static_cast<long>(x)); }
    Real(unsigned x) { init_si(static_cast<long>(x)); }
    Real(unsigned long x) { init_si(static_cast<long>(x)); }
    Real(double x) {
        mpfr_init2(v_, detail::working_prec);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    explicit Real(const std::string& s) {
        mpfr_init2(v_, detail::working_prec);
        if (s.empty() || mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0) {
            mpfr_clear(v_);
            throw std::invalid_argument("not a number: " + s);
        }
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() noexcept { return v_; }
    mpfr_srcptr get() const noexcept { return v_; }
    long precision() const noexcept { return static_cast<long>(mpfr_get_prec(v_)); }

    // Value rounded to the current working precision.
    Real rounded() const {
        Real r;
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    static Real inf(int sign = 1) {
        Real r;
        mpfr_set_inf(r.v_, sign);
        return r;
    }
    static Real nan() {
        Real r;
        mpfr_set_nan(r.v_);
        return r;
    }
    static Real pi() {
        Real r;
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    static Real ln2() {
        Real r;
        mpfr_const_log2(r.v_, MPFR_RNDN);
        return r;
    }
    // 2^e exactly.
    static Real pow2(long e) {
        Real r(1);
        mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
        return r;
    }

    bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
    bool is_inf() const noexcept { return mpfr_inf_p(v_) != 0; }
    bool is_nan() const noexcept { return mpfr_nan_p(v_) != 0; }
    bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
    bool is_integer() const noexcept { return mpfr_integer_p(v_) != 0; }
    int sign() const noexcept { return mpfr_sgn(v_); }

    double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const noexcept { return mpfr_get_si(v_, MPFR_RNDN); }
    // Base-2 exponent e with 2^(e-1) <= |x| < 2^e; meaningful for nonzero finite values.
    long exponent2() const noexcept { return static_cast<long>(mpfr_get_exp(v_)); }

    // Scientific notation with `digits` significant digits.
    std::string to_string(int digits = 20) const {
        if (is_nan()) return "nan";
        if (is_inf()) return sign() > 0 ? "inf" : "-inf";
        char* buf = nullptr;
        std::string fmt = "%." + std::to_string(digits - 1) + "Re";
        mpfr_asprintf(&buf, fmt.c_str(), v_);
        std::string s(buf);
        mpfr_free_str(buf);
        return s;
    }

    Real operator-() const {
        Real r;
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

private:
    void init_si(long x) {
        mpfr_init2(v_, detail::working_prec);
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    mpfr_t v_;
};

namespace detail {
template <int (*F)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)>
inline Real unary(const Real& x) {
    Real r;
    F(r.get(), x.get(), MPFR_RNDN);
    return r;
}
}  // namespace detail

inline Real abs(const Real& x) { return detail::unary<mpfr_abs>(x); }
inline Real sqrt(const Real& x) { return detail::unary<mpfr_sqrt>(x); }
inline Real exp(const Real& x) { return detail::unary<mpfr_exp>(x); }
inline Real expm1(const Real& x) { return detail::unary<mpfr_expm1>(x); }
inline Real log(const Real& x) { return detail::unary<mpfr_log>(x); }
inline Real log1p(const Real& x) { return detail::unary<mpfr_log1p>(x); }
inline Real sin(const Real& x) { return detail::unary<mpfr_sin>(x); }
inline Real cos(const Real& x) { return detail::unary<mpfr_cos>(x); }
inline Real sinh(const Real& x) { return detail::unary<mpfr_sinh>(x); }
inline Real cosh(const Real& x) { return detail::unary<mpfr_cosh>(x); }
inline Real tanh(const Real& x) { return detail::unary<mpfr_tanh>(x); }

inline Real floor(const Real& x) {
    Real r;
    mpfr_floor(r.get(), x.get());
    return r;
}
inline Real ceil(const Real& x) {
    Real r;
    mpfr_ceil(r.get(), x.get());
    return r;
}
// Nearest integer, halves away from zero.
inline Real round(const Real& x) {
    Real r;
    mpfr_round(r.get(), x.get());
    return r;
}
inline Real atan2(const Real& y, const Real& x) {
    Real r;
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}
inline Real hypot(const Real& x, const Real& y) {
    Real r;
    mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& x, const Real& y) {
    Real r;
    mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real& x, long n) {
    Real r;
    mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
    return r;
}
// x mod y with the sign of x; exact.
inline Real fmod(const Real& x, const Real& y) {
    Real r(0);
    mpfr_set_prec(r.get(), std::max(x.precision(), y.precision()));
    mpfr_fmod(r.get(), x.get(), y.get(), MPFR_RNDN);
    return r;
}
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return b < a ? b : a; }
inline Real ldexp(const Real& x, long e) {
    Real r;
    mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
    return r;
}

// log2|x| as a double, for bit-loss bookkeeping.
inline double log2_abs(const Real& x) {
    if (x.is_zero()) return -HUGE_VAL;
    long e;
    double m = mpfr_get_d_2exp(&e, x.get(), MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(e);
}

// Reduce t to the interval (-1, 1] modulo 2, exactly.
inline Real reduce_mod2(const Real& t) {
    Real two(2);
    Real r = fmod(t, two);
    if (r > Real(1)) r = r - two;
    if (r <= Real(-1)) r = r + two;
    return r;
}

// sin(pi t) and cos(pi t) with exact values at multiples of 1/2.
inline void sincos_pi(const Real& t, Real& s, Real& c) {
    Real r = reduce_mod2(t);
    Real twice = ldexp(r, 1);
    if (twice.is_integer()) {
        long k = twice.to_long();  // r in {-1/2, 0, 1/2, 1}
        switch (k) {
            case 0: s = Real(0); c = Real(1); return;
            case 1: s = Real(1); c = Real(0); return;
            case -1: s = Real(-1); c = Real(0); return;
            default: s = Real(0); c = Real(-1); return;
        }
    }
    Real a = Real::pi() * r;
    Real ss, cc;
    mpfr_sin_cos(ss.get(), cc.get(), a.get(), MPFR_RNDN);
    s = ss;
    c = cc;
}
inline Real sin_pi(const Real& t) { Real s, c; sincos_pi(t, s, c); return s; }
inline Real cos_pi(const Real& t) { Real s, c; sincos_pi(t, s, c); return c; }

struct Complex {
    Real re;
    Real im;

    Complex() : re(0), im(0) {}
    Complex(int r) : re(r), im(0) {}
    Complex(long r) : re(r), im(0) {}
    Complex(double r) : re(r), im(0) {}
    Complex(Real r) : re(std::move(r)), im(0) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    static Complex i() { return Complex(Real(0), Real(1)); }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    Complex operator-() const { return Complex(-re, -im); }
    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) { *this = *this * o; return *this; }
    Complex& operator/=(const Complex& o) { *this = *this / o; return *this; }

    friend Complex operator+(const Complex& a, const Complex& b) { return Complex(a.re + b.re, a.im + b.im); }
    friend Complex operator-(const Complex& a, const Complex& b) { return Complex(a.re - b.re, a.im - b.im); }
    friend Complex operator*(const Complex& a, const Complex& b) {
        if (a.im.is_zero() && b.im.is_zero()) return Complex(a.re * b.re, Real(0));
        return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Complex operator*(const Complex& a, const Real& s) { return Complex(a.re * s, a.im * s); }
    friend Complex operator*(const Real& s, const Complex& a) { return Complex(a.re * s, a.im * s); }
    friend Complex operator/(const Complex& a, const Real& s) { return Complex(a.re / s, a.im / s); }
    friend Complex operator/(const Complex& a, const Complex& b) {
        if (b.im.is_zero()) return Complex(a.re / b.re, a.im / b.re);
        Real d = b.re * b.re + b.im * b.im;
        return Complex((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
    }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

inline Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
inline Real abs(const Complex& z) { return hypot(z.re, z.im); }
inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
// Principal argument in (-pi, pi].
inline Real arg(const Complex& z) {
    Real a = atan2(z.im, z.re);
    if (a <= -Real::pi()) a = Real::pi();
    return a;
}
inline Complex polar(const Real& r, const Real& theta) {
    Real s, c;
    mpfr_sin_cos(s.get(), c.get(), theta.get(), MPFR_RNDN);
    return Complex(r * c, r * s);
}
// e^{i pi t}, exact at multiples of 1/2.
inline Complex unit_pi(const Real& t) {
    Real s, c;
    sincos_pi(t, s, c);
    return Complex(c, s);
}
inline Complex exp(const Complex& z) {
    if (z.im.is_zero()) return Complex(exp(z.re), Real(0));
    return polar(exp(z.re), z.im);
}
inline Complex log(const Complex& z) { return Complex(log(abs(z)), arg(z)); }
// Principal square root.
inline Complex sqrt(const Complex& z) {
    if (z.is_zero()) return Complex(0);
    if (z.im.is_zero() && z.re > Real(0)) return Complex(sqrt(z.re), Real(0));
    Real r = abs(z);
    Real t = sqrt(ldexp(r + abs(z.re), -1));
    if (z.re >= Real(0)) return Complex(t, z.im / ldexp(t, 1));
    Real im = z.im.sign() < 0 ? -t : t;
    return Complex(abs(z.im) / ldexp(t, 1), im);
}
// Principal power z^w = exp(w Log z).
inline Complex pow(const Complex& z, const Complex& w) {
    if (z.is_zero()) return Complex(0);
    return exp(w * log(z));
}
inline Complex pow(const Complex& z, long n) {
    Complex result(1), base = z;
    unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    while (e) {
        if (e & 1UL) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return n < 0 ? Complex(1) / result : result;
}
// sin(pi v), cos(pi v) for complex v, exact for real half-integers.
inline Complex sin_pi(const Complex& v) {
    Real s, c;
    sincos_pi(v.re, s, c);
    if (v.im.is_zero()) return Complex(s, Real(0));
    Real y = Real::pi() * v.im;
    return Complex(s * cosh(y), c * sinh(y));
}
inline Complex cos_pi(const Complex& v) {
    Real s, c;
    sincos_pi(v.re, s, c);
    if (v.im.is_zero()) return Complex(c, Real(0));
    Real y = Real::pi() * v.im;
    return Complex(c * cosh(y), -(s * sinh(y)));
}

}  // namespace qscaled
