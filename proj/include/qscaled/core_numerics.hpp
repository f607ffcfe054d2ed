#pragma once

#include "qscaled/mp_real.hpp"

#include <stdexcept>
#include <string>

namespace qscaled {

// Error hierarchy. Every library failure is one of these.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class DomainError : public Error { public: using Error::Error; };
class ResourceError : public Error { public: using Error::Error; };
class SingularityError : public DomainError { public: using DomainError::DomainError; };
class RegimeError : public DomainError { public: using DomainError::DomainError; };
class ConfigurationError : public Error { public: using Error::Error; };
class UnsupportedParameterError : public DomainError { public: using DomainError::DomainError; };
class IoError : public Error { public: using Error::Error; };

class PrecisionContext {
public:
    static constexpr long default_precision_bits = 256;
    static constexpr long default_guard_bits = 32;
    static constexpr long default_max_terms = 100000;

    explicit PrecisionContext(long precision_bits = default_precision_bits,
                              long guard_bits = default_guard_bits,
                              long max_terms = default_max_terms)
        : precision_bits_(precision_bits), guard_bits_(guard_bits), max_terms_(max_terms) {
        if (precision_bits < 64)
            throw ConfigurationError("precision_bits must be >= 64, got " + std::to_string(precision_bits));
        if (guard_bits < 16)
            throw ConfigurationError("guard_bits must be >= 16, got " + std::to_string(guard_bits));
        if (max_terms < 1024)
            throw ConfigurationError("max_terms must be >= 1024, got " + std::to_string(max_terms));
    }

    long precision_bits() const noexcept { return precision_bits_; }
    long guard_bits() const noexcept { return guard_bits_; }
    long max_terms() const noexcept { return max_terms_; }
    long working_bits() const noexcept { return precision_bits_ + guard_bits_; }

    PrecisionContext with_precision(long bits) const {
        return PrecisionContext(bits, guard_bits_, max_terms_);
    }
    // 2^{-precision_bits}
    Real epsilon() const { return Real::pow2(-precision_bits_); }

    friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

private:
    long precision_bits_;
    long guard_bits_;
    long max_terms_;
};

// Value stored as exp(log_mag) * e^{i phase}, phase in (-pi, pi].
struct LogComplex {
    Real log_mag;
    Real phase;

    LogComplex() : log_mag(0), phase(0) {}
    LogComplex(Real lm, Real ph) : log_mag(std::move(lm)), phase(std::move(ph)) {}

    static LogComplex zero() { return LogComplex(Real::inf(-1), Real(0)); }
    static LogComplex one() { return LogComplex(Real(0), Real(0)); }
    bool is_zero() const { return log_mag.is_inf() && log_mag.sign() < 0; }
};

inline Real wrap_phase(const Real& phase) {
    Real pi = Real::pi();
    if (phase > -pi && phase <= pi) return phase;
    Real two_pi = ldexp(pi, 1);
    Real k = ceil((phase - pi) / two_pi);
    Real r = phase - k * two_pi;
    if (r <= -pi) r += two_pi;
    if (r > pi) r -= two_pi;
    return r;
}

inline LogComplex logc_from_complex(const Complex& z) {
    if (z.is_zero()) return LogComplex::zero();
    if (z.im.is_zero()) {
        Real ph = z.re.sign() < 0 ? Real::pi() : Real(0);
        return LogComplex(log(abs(z.re)), ph);
    }
    return LogComplex(log(abs(z)), arg(z));
}

inline LogComplex logc_from_real(const Real& x) { return logc_from_complex(Complex(x)); }

// e^{w} for complex w.
inline LogComplex logc_exp(const Complex& w) { return LogComplex(w.re, wrap_phase(w.im)); }

// e^{i pi t}; the reduction modulo 2 is exact, so signs (-1)^n stay exact.
inline LogComplex logc_unit_pi(const Real& t) {
    Real r = reduce_mod2(t);
    return LogComplex(Real(0), Real::pi() * r);
}

inline Complex to_complex(const LogComplex& a) {
    if (a.is_zero()) return Complex(0);
    Real mag = exp(a.log_mag);
    if (a.phase.is_zero()) return Complex(mag, Real(0));
    Real pi = Real::pi();
    if (a.phase == pi) return Complex(-mag, Real(0));
    Real half = ldexp(pi, -1);
    if (a.phase == half) return Complex(Real(0), mag);
    if (a.phase == -half) return Complex(Real(0), -mag);
    return polar(mag, a.phase);
}

inline LogComplex logc_mul(const LogComplex& a, const LogComplex& b) {
    if (a.is_zero() || b.is_zero()) return LogComplex::zero();
    return LogComplex(a.log_mag + b.log_mag, wrap_phase(a.phase + b.phase));
}

inline LogComplex logc_inv(const LogComplex& a) {
    if (a.is_zero()) throw SingularityError("reciprocal of zero");
    return LogComplex(-a.log_mag, wrap_phase(-a.phase));
}

inline LogComplex logc_div(const LogComplex& a, const LogComplex& b) { return logc_mul(a, logc_inv(b)); }

inline LogComplex logc_neg(const LogComplex& a) {
    if (a.is_zero()) return a;
    return LogComplex(a.log_mag, wrap_phase(a.phase + Real::pi()));
}

// a^p for real p (principal branch of the stored phase).
inline LogComplex logc_pow(const LogComplex& a, const Real& p) {
    if (a.is_zero()) {
        if (p.sign() > 0) return a;
        throw SingularityError("non-positive power of zero");
    }
    return LogComplex(a.log_mag * p, wrap_phase(a.phase * p));
}

inline LogComplex logc_sqrt(const LogComplex& a) {
    if (a.is_zero()) return a;
    return LogComplex(ldexp(a.log_mag, -1), ldexp(a.phase, -1));
}

inline Real logc_abs_log(const LogComplex& a) { return a.log_mag; }

// |a/b - 1| evaluated without forming a or b.
inline Real logc_rel_dev(const LogComplex& a, const LogComplex& b) {
    if (b.is_zero()) throw DomainError("relative deviation against a zero reference");
    if (a.is_zero()) return Real(1);
    Real d = a.log_mag - b.log_mag;
    Real phi = wrap_phase(a.phase - b.phase);
    if (d.is_zero() && phi.is_zero()) return Real(0);
    // r e^{i phi} - 1 = (expm1(d) cos phi - 2 sin^2(phi/2)) + i e^d sin phi
    Real s, c;
    mpfr_sin_cos(s.get(), c.get(), phi.get(), MPFR_RNDN);
    Real sh = sin(ldexp(phi, -1));
    Real em1 = expm1(d);
    Real re = em1 * c - ldexp(sh * sh, 1);
    Real im = exp(d) * s;
    return hypot(re, im);
}

// Accumulates a product of complex factors as (sum of log magnitudes, unit phase).
// Real factors contribute exact signs.
class LogProduct {
public:
    void mul(const Complex& f) {
        if (f.is_zero()) {
            zero_ = true;
            return;
        }
        if (f.im.is_zero()) {
            log_mag_ += log(abs(f.re));
            if (f.re.sign() < 0) unit_ = -unit_;
            return;
        }
        Real m = abs(f);
        log_mag_ += log(m);
        unit_ = unit_ * (f / m);
        if (++since_norm_ >= 32) {
            unit_ = unit_ / abs(unit_);
            since_norm_ = 0;
        }
    }
    void mul(const LogComplex& f) {
        if (f.is_zero()) {
            zero_ = true;
            return;
        }
        log_mag_ += f.log_mag;
        extra_phase_ += f.phase;
    }
    void mul_log_real(const Real& log_abs, bool negative) {
        log_mag_ += log_abs;
        if (negative) unit_ = -unit_;
    }
    bool is_zero() const { return zero_; }
    LogComplex value() const {
        if (zero_) return LogComplex::zero();
        LogComplex u = logc_from_complex(unit_);
        return LogComplex(log_mag_, wrap_phase(u.phase + extra_phase_));
    }

private:
    Real log_mag_{0};
    Real extra_phase_{0};
    Complex unit_{1};
    int since_norm_ = 0;
    bool zero_ = false;
};

}  // namespace qscaled
