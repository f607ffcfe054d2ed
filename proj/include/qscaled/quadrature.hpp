#pragma once

#include "qscaled/core_numerics.hpp"
#include "qscaled/summation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

namespace qscaled {

struct QuadratureResult {
    std::vector<Real> values;
    std::vector<Real> abs_values;  // integrals of |f_i|, used as error scales
    int levels = 0;
    long evaluations = 0;
    bool converged = false;
};

// Vector-valued integrand: f(x, out) fills out[0..dim).
using VectorIntegrand = std::function<void(const Real& x, std::vector<Real>& out)>;

namespace detail {

// Evaluates f at the given abscissae. Workers write by index, so the result
// does not depend on the number of threads.
inline std::vector<std::vector<Real>> evaluate_nodes(const VectorIntegrand& f, const std::vector<Real>& xs,
                                                     std::size_t dim, long bits, int jobs) {
    std::vector<std::vector<Real>> out(xs.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        ScopedPrecision sp(bits);
        for (std::size_t i = begin; i < xs.size(); i += stride) {
            std::vector<Real> v(dim);
            f(xs[i], v);
            out[i] = std::move(v);
        }
    };
    std::size_t nj = static_cast<std::size_t>(std::max(1, jobs));
    if (nj == 1 || xs.size() < 8) {
        work(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < nj; ++j) pool.emplace_back(work, j, nj);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace detail

// Double-exponential (tanh-sinh) rule on [a, b]. Each level halves the step;
// stops once every component changes by less than tol times its |f| integral.
inline QuadratureResult tanh_sinh(const VectorIntegrand& f, const Real& a, const Real& b, std::size_t dim,
                                  const PrecisionContext& ctx, const Real& tol, int max_level = 12, int jobs = 1) {
    ScopedPrecision sp(ctx.working_bits());
    const Real half_pi = ldexp(Real::pi(), -1);
    const Real c = ldexp(a + b, -1);
    const Real d = ldexp(b - a, -1);
    // beyond t_max the weights are below 2^{-bits}
    const double t_max = std::log(2.0 * static_cast<double>(ctx.working_bits()) * std::log(2.0) / M_PI) + 0.5;

    QuadratureResult res;
    res.values.assign(dim, Real(0));
    res.abs_values.assign(dim, Real(0));
    std::vector<Real> sum(dim, Real(0)), abs_sum(dim, Real(0));

    auto node = [&](const Real& t, Real& x, Real& w) {
        Real s = half_pi * sinh(t);
        Real ch = cosh(s);
        x = c + d * tanh(s);
        w = d * half_pi * cosh(t) / (ch * ch);
    };

    for (int level = 0; level <= max_level; ++level) {
        Real h = Real::pow2(-level);
        long kmax = static_cast<long>(std::ceil(t_max * std::ldexp(1.0, level)));
        std::vector<Real> xs, ws;
        for (long k = -kmax; k <= kmax; ++k) {
            if (level > 0 && (k % 2 == 0)) continue;
            Real t = Real(k) * h;
            Real x, w;
            node(t, x, w);
            if (!(x > a && x < b)) continue;
            xs.push_back(x);
            ws.push_back(w);
        }
        auto vals = detail::evaluate_nodes(f, xs, dim, ctx.working_bits(), jobs);
        res.evaluations += static_cast<long>(xs.size());
        std::vector<Real> prev = res.values;
        for (std::size_t i = 0; i < dim; ++i) {
            std::vector<Real> contrib, acontrib;
            contrib.reserve(xs.size());
            acontrib.reserve(xs.size());
            for (std::size_t j = 0; j < xs.size(); ++j) {
                contrib.push_back(ws[j] * vals[j][i]);
                acontrib.push_back(ws[j] * abs(vals[j][i]));
            }
            sum[i] += pairwise_sum(contrib);
            abs_sum[i] += pairwise_sum(acontrib);
            res.values[i] = sum[i] * h;
            res.abs_values[i] = abs_sum[i] * h;
        }
        res.levels = level;
        if (level >= 3) {
            bool ok = true;
            for (std::size_t i = 0; i < dim && ok; ++i)
                ok = abs(res.values[i] - prev[i]) <= tol * res.abs_values[i];
            if (ok) {
                res.converged = true;
                break;
            }
        }
    }
    return res;
}

struct Window {
    Real lo, peak, hi;
};

// Finds [lo, hi] outside of which log_f(t) stays below max - drop, scanning
// outward from the coarse maximum in steps of `step`.
inline Window scan_window(const std::function<Real(const Real&)>& log_f, const Real& drop,
                                         double start_lo = -10.0, double start_hi = 10.0, double step = 0.5,
                                         double limit = 5000.0) {
    Real best = Real::inf(-1);
    double t_best = 0.0;
    for (double t = start_lo; t <= start_hi; t += step) {
        Real v = log_f(Real(t));
        if (v > best) {
            best = v;
            t_best = t;
        }
    }
    if (best.is_inf()) throw DomainError("integrand vanishes on the scan grid");
    auto walk = [&](double dir) {
        double t = t_best;
        Real prev = best;
        for (;;) {
            t += dir * step;
            if (std::fabs(t) > limit) throw ResourceError("quadrature window scan did not terminate");
            Real v = log_f(Real(t));
            if (v > best) best = v;
            if (v < best - drop && v < prev) return t;
            prev = v;
        }
    };
    double hi = walk(1.0);
    double lo = walk(-1.0);
    return {Real(lo), Real(t_best), Real(hi)};
}

}  // namespace qscaled
