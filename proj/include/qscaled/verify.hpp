#pragma once

#include "qscaled/asymptotics.hpp"
#include "qscaled/orthogonality.hpp"
#include "qscaled/theta_eta.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace qscaled {

enum class SweepTarget { lemma1, lemma2, theta_identities, theorem_rep, theorem_scaled, orthogonality, rate_fit };

// Ordered key/value parameters of one grid point; values are decimal strings.
// The keys become the leading CSV columns, so every point of a grid must use
// the same keys in the same order.
using GridPoint = std::vector<std::pair<std::string, std::string>>;

struct SweepConfig {
    SweepTarget target = SweepTarget::lemma1;
    std::vector<GridPoint> grid;
    long precision_bits = 256;
    long max_terms = PrecisionContext::default_max_terms;
    std::string output_path;  // empty or "-" means stdout
    bool fail_fast = false;
    int jobs = 1;
    bool timing = false;  // fill the wall_ms column (makes output run-dependent)
};

enum class RowStatus { pass, fail, skip };

struct SweepRow {
    std::vector<std::string> cells;  // parameter and value columns, without pass/wall_ms
    RowStatus status = RowStatus::pass;
    std::string reason;               // skip reason or failure detail
    std::optional<Real> metric;       // measured quantity used for monotonicity checks
    double ratio = 0.0;               // |measured| / bound, 0 for skipped rows
    double wall_ms = 0.0;
};

struct SweepSummary {
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t skip = 0;
};

struct SweepReport {
    std::vector<std::string> header;  // includes the trailing pass and wall_ms columns
    std::vector<SweepRow> rows;
    SweepSummary summary;
    std::optional<std::size_t> worst_case;  // row with maximal ratio
    bool timing = false;
};

enum ExitCode : int { exit_ok = 0, exit_violation = 1, exit_configuration = 2, exit_resource = 3 };

inline int exit_code(const SweepReport& r) { return r.summary.fail == 0 ? exit_ok : exit_violation; }

// ---------------------------------------------------------------------------
// Identifiers
// ---------------------------------------------------------------------------

enum class TheoremFamily { euler, qgamma, aq, bessel, sw, laguerre };

inline TheoremFamily parse_theorem(const std::string& s) {
    static const std::map<std::string, TheoremFamily> m = {
        {"euler", TheoremFamily::euler}, {"qgamma", TheoremFamily::qgamma}, {"aq", TheoremFamily::aq},
        {"bessel", TheoremFamily::bessel}, {"sw", TheoremFamily::sw},       {"laguerre", TheoremFamily::laguerre},
        {"2.1", TheoremFamily::euler},   {"2.2", TheoremFamily::qgamma},    {"2.3", TheoremFamily::aq},
        {"2.4", TheoremFamily::bessel},  {"2.5", TheoremFamily::sw},        {"2.6", TheoremFamily::laguerre}};
    auto it = m.find(s);
    if (it == m.end()) throw ConfigurationError("unknown theorem id '" + s + "'");
    return it->second;
}

inline std::string_view theorem_name(TheoremFamily f) {
    switch (f) {
        case TheoremFamily::euler: return "euler";
        case TheoremFamily::qgamma: return "qgamma";
        case TheoremFamily::aq: return "aq";
        case TheoremFamily::bessel: return "bessel";
        case TheoremFamily::sw: return "sw";
        case TheoremFamily::laguerre: return "laguerre";
    }
    return "unknown";
}

inline std::vector<ScaledLimit> limits_of(TheoremFamily f) {
    switch (f) {
        case TheoremFamily::euler: return {ScaledLimit::euler_positive, ScaledLimit::euler_negative};
        case TheoremFamily::qgamma: return {ScaledLimit::qgamma_left, ScaledLimit::qgamma_right};
        case TheoremFamily::aq: return {ScaledLimit::aq_negative, ScaledLimit::aq_positive};
        case TheoremFamily::bessel: return {ScaledLimit::bessel_imaginary, ScaledLimit::bessel_real};
        case TheoremFamily::sw:
            return {ScaledLimit::sw_negative, ScaledLimit::sw_positive, ScaledLimit::sw_orthonormal};
        case TheoremFamily::laguerre:
            return {ScaledLimit::laguerre_negative, ScaledLimit::laguerre_positive,
                    ScaledLimit::laguerre_orthonormal};
    }
    return {};
}

// Accepts descriptive names (with '-' or '_') and numeric aliases.
inline ScaledLimit parse_limit(std::string s) {
    static const std::map<std::string, ScaledLimit> aliases = {
        {"2.2", ScaledLimit::euler_positive},      {"2.3", ScaledLimit::euler_negative},
        {"2.5", ScaledLimit::qgamma_left},         {"2.6", ScaledLimit::qgamma_right},
        {"2.11", ScaledLimit::aq_negative},        {"2.12", ScaledLimit::aq_positive},
        {"2.17", ScaledLimit::bessel_imaginary},   {"2.18", ScaledLimit::bessel_real},
        {"2.23", ScaledLimit::sw_negative},        {"2.24", ScaledLimit::sw_negative},
        {"2.25", ScaledLimit::sw_positive},        {"2.26", ScaledLimit::sw_orthonormal},
        {"2.31", ScaledLimit::laguerre_negative},  {"2.32", ScaledLimit::laguerre_positive},
        {"2.33", ScaledLimit::laguerre_orthonormal}};
    if (auto it = aliases.find(s); it != aliases.end()) return it->second;
    for (char& c : s)
        if (c == '_') c = '-';
    for (ScaledLimit l : all_scaled_limits)
        if (limit_name(l) == s) return l;
    throw ConfigurationError("unknown scaled limit '" + s + "'");
}

inline PolynomialFamily parse_family(const std::string& s) {
    if (s == "sw" || s == "stieltjes-wigert") return PolynomialFamily::stieltjes_wigert;
    if (s == "qlaguerre" || s == "q-laguerre") return PolynomialFamily::q_laguerre;
    throw ConfigurationError("unknown polynomial family '" + s + "'");
}

inline std::string family_name(PolynomialFamily f) {
    return f == PolynomialFamily::stieltjes_wigert ? "sw" : "qlaguerre";
}

// ---------------------------------------------------------------------------
// Formatting helpers
// ---------------------------------------------------------------------------

inline std::string fmt(const Real& x) { return x.to_string(20); }

inline std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_ms(double ms) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

inline std::string join_longs(const std::vector<long>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(v[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------
// Grid builders
// ---------------------------------------------------------------------------

// Remainders r1 and r2 for a in {0.1, 1, 2+i, -3, 4i}, q in {0.3, 0.5, 0.9}, from
// the first n meeting |a|q^n/(1-q) < 1/2 through ten more.
inline std::vector<GridPoint> default_grid_lemma1(long precision_bits = 256) {
    ScopedPrecision sp(precision_bits + 32);
    const std::vector<std::pair<std::string, std::string>> as = {
        {"0.1", "0"}, {"1", "0"}, {"2", "1"}, {"-3", "0"}, {"0", "4"}};
    const std::vector<std::string> qs = {"0.3", "0.5", "0.9"};
    std::vector<GridPoint> g;
    for (const auto& [re, im] : as)
        for (const auto& qs_ : qs) {
            Real q(qs_);
            Real aa = abs(Complex(Real(re), Real(im)));
            long n0 = 1;
            while (!(aa * pow(q, n0) / (Real(1) - q) < Real(0.5))) ++n0;
            for (long n = n0; n <= n0 + 10; ++n)
                for (const char* which : {"r1", "r2"})
                    g.push_back({{"target", which}, {"a_re", re}, {"a_im", im}, {"q", qs_}, {"n", std::to_string(n)}});
        }
    return g;
}

inline std::vector<GridPoint> default_grid_lemma2() {
    std::vector<GridPoint> g;
    for (const char* gamma : {"1", "2"})
        for (const char* a : {"0.3", "0.4"})
            for (long n : {16L, 32L, 64L})
                g.push_back({{"target", "qq_infinity"}, {"gamma", gamma}, {"a", a}, {"n", std::to_string(n)}});
    return g;
}

// Random (v, tau) with |Re v|, |Im v| <= 1, Re tau in [-1/2, 1/2], Im tau in [0.05, 2],
// plus the stress point tau = 0.02i. Each point yields triple-product, modular and
// (for the first kind only) eta checks.
inline std::vector<GridPoint> default_grid_theta(int count = 100, std::uint64_t seed = 20240611) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0), im_tau(0.05, 2.0), half(-0.5, 0.5);
    std::vector<std::array<std::string, 4>> pts;
    for (int i = 0; i < count; ++i) {
        double vr = unit(rng), vi = unit(rng), tr = half(rng), ti = im_tau(rng);
        pts.push_back({fmt_double(vr), fmt_double(vi), fmt_double(tr), fmt_double(ti)});
    }
    pts.push_back({"0.3", "0.1", "0", "0.02"});
    std::vector<GridPoint> g;
    for (const auto& p : pts) {
        for (const char* check : {"triple_product", "modular"})
            for (int kind = 1; kind <= 4; ++kind)
                g.push_back({{"target", check}, {"kind", std::to_string(kind)}, {"v_re", p[0]}, {"v_im", p[1]},
                             {"tau_re", p[2]}, {"tau_im", p[3]}});
        g.push_back({{"target", "eta"}, {"kind", ""}, {"v_re", ""}, {"v_im", ""}, {"tau_re", p[2]}, {"tau_im", p[3]}});
    }
    return g;
}

inline std::string rep_target_name(TheoremFamily f) {
    switch (f) {
        case TheoremFamily::aq: return "aq_theta_rep";
        case TheoremFamily::bessel: return "bessel_theta_rep";
        case TheoremFamily::sw: return "sw_theta_rep";
        case TheoremFamily::laguerre: return "laguerre_theta_rep";
        default: throw ConfigurationError("theorem '" + std::string(theorem_name(f)) + "' has no theta representation");
    }
}

// Smallest n with 2 q^{n/d}/(1-q) < 1, d = 2 (aq, bessel) or 4 (sw, laguerre).
inline long regime_gate_start(TheoremFamily f, const Real& q) {
    long d = (f == TheoremFamily::aq || f == TheoremFamily::bessel) ? 2 : 4;
    QPoint qp(q);
    for (long n = 1;; ++n) {
        Real v = ldexp(qp.pow(Real(n) / Real(d)), 1) / (Real(1) - q);
        if (v < Real(1)) return n;
    }
}

// q in qs, z in zs, n from one below the gate (a skip row) through gate + span.
inline std::vector<GridPoint> grid_theorem_rep(TheoremFamily f, const std::vector<std::string>& qs,
                                               const std::vector<std::pair<std::string, std::string>>& zs,
                                               long span = 16, const std::string& extra = "0.5",
                                               long precision_bits = 256) {
    ScopedPrecision sp(precision_bits + 32);
    const std::string name = rep_target_name(f);
    const bool has_extra = f == TheoremFamily::bessel || f == TheoremFamily::laguerre;
    std::vector<GridPoint> g;
    for (const auto& q : qs) {
        long n0 = regime_gate_start(f, Real(q));
        for (const auto& [zr, zi] : zs)
            for (long n = std::max(1L, n0 - 1); n <= n0 + span; ++n)
                g.push_back({{"target", name}, {"q", q}, {"z_re", zr}, {"z_im", zi}, {"n", std::to_string(n)},
                             {"extra_param", has_extra ? extra : ""}});
    }
    return g;
}

inline std::vector<GridPoint> default_grid_theorem_rep(TheoremFamily f, long precision_bits = 256) {
    return grid_theorem_rep(f, {"0.3", "0.5"}, {{"2", "0"}, {"1", "1"}, {"0.5", "0"}}, 16, "0.5", precision_bits);
}

inline std::string extra_param_of(ScaledLimit l, const std::string& nu, const std::string& alpha) {
    if (needs_nu(l)) return nu;
    if (needs_alpha(l)) return alpha;
    return "";
}

inline std::vector<GridPoint> grid_scaled(const std::vector<ScaledLimit>& limits, const std::string& a,
                                          const std::vector<std::string>& us, const std::vector<long>& ns,
                                          const std::string& nu = "0.5", const std::string& alpha = "0.5") {
    std::vector<GridPoint> g;
    for (ScaledLimit l : limits)
        for (const auto& u : us)
            for (long n : ns)
                g.push_back({{"target", std::string(limit_name(l))}, {"a", a}, {"u", u}, {"n", std::to_string(n)},
                             {"extra_param", extra_param_of(l, nu, alpha)}});
    return g;
}

inline std::vector<GridPoint> grid_rate_fit(const std::vector<ScaledLimit>& limits, const std::string& a,
                                            const std::vector<std::string>& us, const std::vector<long>& ns,
                                            const std::string& nu = "0.5", const std::string& alpha = "0.5") {
    std::vector<GridPoint> g;
    for (ScaledLimit l : limits)
        for (const auto& u : us)
            g.push_back({{"target", std::string(limit_name(l))}, {"a", a}, {"u", u}, {"n_list", join_longs(ns)},
                         {"extra_param", extra_param_of(l, nu, alpha)}});
    return g;
}

inline std::vector<GridPoint> grid_orthogonality(PolynomialFamily f, const std::string& q, const std::string& alpha,
                                                 long max_degree, const std::string& tolerance = "1e-8") {
    return {{{"target", family_name(f)},
             {"q", q},
             {"alpha", f == PolynomialFamily::q_laguerre ? alpha : ""},
             {"max_degree", std::to_string(max_degree)},
             {"tolerance", tolerance}}};
}

// ---------------------------------------------------------------------------
// Target evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline const std::string& param(const GridPoint& p, const std::string& key) {
    for (const auto& [k, v] : p)
        if (k == key) return v;
    throw ConfigurationError("grid point lacks parameter '" + key + "'");
}

inline Real real_param(const GridPoint& p, const std::string& key) {
    const std::string& s = param(p, key);
    try {
        return Real(s);
    } catch (const std::invalid_argument&) {
        throw ConfigurationError("parameter '" + key + "' is not a number: '" + s + "'");
    }
}

inline long long_param(const GridPoint& p, const std::string& key) {
    const std::string& s = param(p, key);
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigurationError("parameter '" + key + "' is not an integer: '" + s + "'");
    }
}

inline std::vector<long> long_list_param(const GridPoint& p, const std::string& key) {
    std::vector<long> out;
    std::stringstream ss(param(p, key));
    std::string item;
    while (std::getline(ss, item, ';')) {
        try {
            out.push_back(std::stol(item));
        } catch (const std::exception&) {
            throw ConfigurationError("parameter '" + key + "' has a non-integer entry '" + item + "'");
        }
    }
    return out;
}

inline std::vector<std::string> value_columns(SweepTarget t) {
    switch (t) {
        case SweepTarget::lemma1: return {"value_abs", "bound", "ratio"};
        case SweepTarget::lemma2: return {"rel_dev", "bound", "ratio"};
        case SweepTarget::theta_identities: return {"rel_err", "bound", "ratio"};
        case SweepTarget::theorem_rep: return {"residual_abs", "bound", "ratio"};
        case SweepTarget::theorem_scaled:
            return {"direct_log_mag", "direct_phase", "main_log_mag", "main_phase", "rel_dev",
                    "stated_rate",    "envelope",     "ratio",        "oscillatory_factor", "absolute_mode"};
        case SweepTarget::orthogonality: return {"m", "n", "integral", "expected", "deviation", "ratio"};
        case SweepTarget::rate_fit: return {"slope", "lower", "upper"};
    }
    return {};
}

inline SweepRow bound_row(const Real& measured, const Real& bound) {
    SweepRow r;
    Real ratio = bound.is_zero() ? (measured.is_zero() ? Real(0) : Real::inf()) : measured / bound;
    r.cells = {fmt(measured), fmt(bound), fmt(ratio)};
    r.ratio = ratio.to_double();
    r.status = measured <= bound ? RowStatus::pass : RowStatus::fail;
    r.metric = measured;
    return r;
}

inline Real rel_err(const Complex& a, const Complex& b) {
    Real d = abs(a - b);
    Real s = abs(b);
    return s.is_zero() ? d : d / s;
}

inline std::vector<SweepRow> evaluate_point(SweepTarget t, const GridPoint& p, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx.working_bits());
    const std::string& target = param(p, "target");
    switch (t) {
        case SweepTarget::lemma1: {
            Complex a(real_param(p, "a_re"), real_param(p, "a_im"));
            QPoint qp(real_param(p, "q"));
            long n = long_param(p, "n");
            RemainderReport rep;
            if (target == "r1") rep = remainder_r1(a, qp, n, ctx);
            else if (target == "r2") rep = remainder_r2(a, qp, n, ctx);
            else throw ConfigurationError("lemma1 target must be r1 or r2, got '" + target + "'");
            return {bound_row(abs(rep.value), rep.bound)};
        }
        case SweepTarget::lemma2: {
            Real gamma = real_param(p, "gamma");
            Real a = real_param(p, "a");
            long n = long_param(p, "n");
            EtaAsymptoticReport rep = qq_infinity_scaled(gamma, a, n, ctx);
            return {bound_row(rep.rel_dev, Real(10) * rep.envelope)};
        }
        case SweepTarget::theta_identities: {
            Complex tau(real_param(p, "tau_re"), real_param(p, "tau_im"));
            if (target == "eta") {
                Complex lhs = dedekind_eta(tau, ctx);
                Complex rhs = eta_product(tau, ctx);
                return {bound_row(rel_err(lhs, rhs), Real::pow2(-240))};
            }
            int kind = static_cast<int>(long_param(p, "kind"));
            ModularPoint mp(Complex(real_param(p, "v_re"), real_param(p, "v_im")), tau);
            Complex ref = theta(kind, mp, ctx);
            if (target == "triple_product")
                return {bound_row(rel_err(theta_triple_product(kind, mp, ctx), ref), Real::pow2(-246))};
            if (target == "modular") {
                // transformed value at (v/tau, -1/tau) against the reduced evaluation there
                ModularPoint image(mp.v / tau, Complex(-1) / tau);
                return {bound_row(rel_err(theta_modular(kind, mp, ctx), theta(kind, image, ctx)), Real::pow2(-240))};
            }
            throw ConfigurationError("unknown theta check '" + target + "'");
        }
        case SweepTarget::theorem_rep: {
            QPoint qp(real_param(p, "q"));
            Complex z(real_param(p, "z_re"), real_param(p, "z_im"));
            long n = long_param(p, "n");
            ThetaRepResult r;
            if (target == "aq_theta_rep") r = aq_theta_rep(z, qp, n, ctx);
            else if (target == "bessel_theta_rep") r = bessel_theta_rep(z, real_param(p, "extra_param"), qp, n, ctx);
            else if (target == "sw_theta_rep") r = sw_theta_rep(z, qp, n, ctx);
            else if (target == "laguerre_theta_rep")
                r = laguerre_theta_rep(z, real_param(p, "extra_param"), qp, n, ctx);
            else throw ConfigurationError("unknown theta representation '" + target + "'");
            return {bound_row(abs(r.residual), r.bound)};
        }
        case SweepTarget::theorem_scaled: {
            ScaledLimit l = parse_limit(target);
            long n = long_param(p, "n");
            Real extra = needs_nu(l) || needs_alpha(l) ? real_param(p, "extra_param") : Real(0.5);
            ScaledRegime r = ScaledRegime::for_limit(l, n, real_param(p, "a"), real_param(p, "u"), extra, extra);
            AsymptoticComparison c = compare_asymptotic(l, r, ctx);
            Real env = exp(-c.stated_rate);
            Real ratio = c.rel_dev / env;
            SweepRow row;
            row.cells = {fmt(c.direct.log_mag), fmt(c.direct.phase),    fmt(c.main_term.log_mag),
                         fmt(c.main_term.phase), fmt(c.rel_dev),        fmt(c.stated_rate),
                         fmt(env),               fmt(ratio),            fmt(c.oscillatory_factor),
                         c.absolute_mode ? "true" : "false"};
            row.ratio = ratio.to_double();
            row.metric = c.rel_dev;
            row.status = RowStatus::pass;  // decided by the monotonicity pass
            return {row};
        }
        case SweepTarget::orthogonality: {
            PolynomialFamily fam = parse_family(target);
            QPoint qp(real_param(p, "q"));
            Real alpha = fam == PolynomialFamily::q_laguerre ? real_param(p, "alpha") : Real(0);
            Real tol = real_param(p, "tolerance");
            OrthogonalityReport rep =
                check_orthogonality(fam, qp, alpha, long_param(p, "max_degree"), ctx, tol, 1);
            std::vector<SweepRow> rows;
            for (const auto& e : rep.entries) {
                SweepRow row;
                Real ratio = e.deviation / tol;
                row.cells = {std::to_string(e.m), std::to_string(e.n), fmt(e.integral), fmt(e.expected),
                             fmt(e.deviation), fmt(ratio)};
                row.ratio = ratio.to_double();
                row.metric = e.deviation;
                row.status = e.pass && rep.converged ? RowStatus::pass : RowStatus::fail;
                if (!rep.converged) row.reason = "quadrature did not converge";
                rows.push_back(std::move(row));
            }
            return rows;
        }
        case SweepTarget::rate_fit: {
            ScaledLimit l = parse_limit(target);
            Real extra = needs_nu(l) || needs_alpha(l) ? real_param(p, "extra_param") : Real(0.5);
            LimitParams lp{extra, extra};
            Real slope = rate_fit(l, real_param(p, "a"), real_param(p, "u"), long_list_param(p, "n_list"), ctx, lp);
            const Real pi = Real::pi();
            Real lower = -Real(4) * pi, upper = -ldexp(pi, -1);
            SweepRow row;
            row.cells = {fmt(slope), fmt(lower), fmt(upper)};
            bool ok = slope >= lower && slope <= upper;
            row.status = ok ? RowStatus::pass : RowStatus::fail;
            // distance outside the window relative to its width, 0 inside
            Real out = slope < lower ? lower - slope : (slope > upper ? slope - upper : Real(0));
            row.ratio = (out / (upper - lower)).to_double();
            row.metric = slope;
            return {row};
        }
    }
    throw ConfigurationError("unknown sweep target");
}

// Rows of one group (same parameters apart from n) must have strictly decreasing metric.
inline void apply_monotonicity(SweepReport& rep, std::size_t n_col, const std::vector<std::size_t>& group_cols,
                               bool keep_local_status) {
    std::map<std::vector<std::string>, std::size_t> last;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        SweepRow& row = rep.rows[i];
        if (row.status == RowStatus::skip || !row.metric) continue;
        std::vector<std::string> key;
        for (std::size_t c : group_cols) key.push_back(row.cells[c]);
        auto it = last.find(key);
        if (!keep_local_status) row.status = RowStatus::pass;
        if (it != last.end()) {
            const SweepRow& prev = rep.rows[it->second];
            if (!(*row.metric < *prev.metric)) {
                row.status = RowStatus::fail;
                row.reason = "not strictly decreasing from n = " + prev.cells[n_col];
            }
        }
        last[key] = i;
    }
}

inline std::string skip_reason(const std::exception& e) {
    if (dynamic_cast<const RegimeError*>(&e)) return "regime gate";
    if (dynamic_cast<const SingularityError*>(&e)) return "singularity";
    if (dynamic_cast<const UnsupportedParameterError*>(&e)) return "unsupported parameter";
    return "precondition";
}

inline std::string describe(const GridPoint& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += p[i].first + "=" + p[i].second;
    }
    return s + ")";
}

}  // namespace detail

inline void finalize_report(SweepReport& rep) {
    rep.summary = {};
    rep.worst_case.reset();
    double worst = -1.0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const SweepRow& r = rep.rows[i];
        switch (r.status) {
            case RowStatus::pass: ++rep.summary.pass; break;
            case RowStatus::fail: ++rep.summary.fail; break;
            case RowStatus::skip: ++rep.summary.skip; break;
        }
        if (r.status != RowStatus::skip && r.ratio > worst) {
            worst = r.ratio;
            rep.worst_case = i;
        }
    }
}

// Runs every grid point, in parallel when cfg.jobs > 1. Rows keep grid order.
// Points violating a precondition become skip rows. Configuration and resource
// errors propagate, naming the offending tuple.
inline SweepReport run_sweep(const SweepConfig& cfg) {
    if (cfg.grid.empty()) throw ConfigurationError("sweep grid is empty");
    if (cfg.jobs < 1) throw ConfigurationError("jobs must be positive");
    const PrecisionContext ctx(cfg.precision_bits, PrecisionContext::default_guard_bits, cfg.max_terms);
    const std::vector<std::string> value_cols = detail::value_columns(cfg.target);

    SweepReport rep;
    rep.timing = cfg.timing;
    for (const auto& [k, v] : cfg.grid.front()) rep.header.push_back(k);
    const std::size_t n_params = rep.header.size();
    for (const auto& gp : cfg.grid) {
        bool same = gp.size() == n_params;
        for (std::size_t i = 0; same && i < n_params; ++i) same = gp[i].first == rep.header[i];
        if (!same) throw ConfigurationError("grid point " + detail::describe(gp) + " does not match the grid's keys");
    }
    rep.header.insert(rep.header.end(), value_cols.begin(), value_cols.end());
    rep.header.push_back("pass");
    rep.header.push_back("wall_ms");

    const std::size_t N = cfg.grid.size();
    std::vector<std::vector<SweepRow>> results(N);
    std::vector<std::exception_ptr> errors(N);

    auto run_one = [&](std::size_t i) {
        const GridPoint& gp = cfg.grid[i];
        auto t0 = std::chrono::steady_clock::now();
        std::vector<SweepRow> rows;
        try {
            try {
                rows = detail::evaluate_point(cfg.target, gp, ctx);
            } catch (const ConfigurationError&) {
                throw;
            } catch (const DomainError& e) {
                SweepRow row;
                row.status = RowStatus::skip;
                row.reason = detail::skip_reason(e) + ": " + e.what();
                row.cells.assign(value_cols.size(), "");
                rows.push_back(std::move(row));
            }
        } catch (const ConfigurationError& e) {
            errors[i] = std::make_exception_ptr(ConfigurationError(std::string(e.what()) + " at " + detail::describe(gp)));
            return;
        } catch (const ResourceError& e) {
            errors[i] = std::make_exception_ptr(ResourceError(std::string(e.what()) + " at " + detail::describe(gp)));
            return;
        } catch (const std::exception& e) {
            errors[i] = std::make_exception_ptr(ConfigurationError(std::string(e.what()) + " at " + detail::describe(gp)));
            return;
        }
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        for (auto& r : rows) {
            std::vector<std::string> cells;
            for (const auto& [k, v] : gp) cells.push_back(v);
            cells.insert(cells.end(), r.cells.begin(), r.cells.end());
            r.cells = std::move(cells);
            r.wall_ms = ms / static_cast<double>(rows.size());
        }
        results[i] = std::move(rows);
    };

    auto local_fail = [&](std::size_t i) {
        if (errors[i]) return true;
        for (const auto& r : results[i])
            if (r.status == RowStatus::fail) return true;
        return false;
    };

    const std::size_t jobs = static_cast<std::size_t>(cfg.jobs);
    std::size_t done = 0;
    while (done < N) {
        // batches keep fail-fast cheap; results do not depend on the batch size
        std::size_t end = cfg.fail_fast ? std::min(N, done + jobs) : N;
        if (jobs == 1 || end - done == 1) {
            for (std::size_t i = done; i < end; ++i) run_one(i);
        } else {
            std::vector<std::thread> pool;
            std::size_t nthreads = std::min(jobs, end - done);
            for (std::size_t j = 0; j < nthreads; ++j)
                pool.emplace_back([&, j] {
                    for (std::size_t i = done + j; i < end; i += nthreads) run_one(i);
                });
            for (auto& t : pool) t.join();
        }
        bool stop = false;
        for (std::size_t i = done; i < end; ++i) stop = stop || local_fail(i);
        done = end;
        if (cfg.fail_fast && stop) break;
    }

    for (std::size_t i = 0; i < done; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        for (auto& r : results[i]) rep.rows.push_back(std::move(r));
    }

    // monotonicity in n, for targets whose assertion spans rows
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < rep.header.size(); ++i)
            if (rep.header[i] == name) return i;
        throw ConfigurationError("missing column " + name);
    };
    if (cfg.target == SweepTarget::lemma2)
        detail::apply_monotonicity(rep, col("n"), {col("target"), col("gamma"), col("a")}, true);
    if (cfg.target == SweepTarget::theorem_scaled)
        detail::apply_monotonicity(rep, col("n"), {col("target"), col("a"), col("u"), col("extra_param")}, false);

    if (cfg.fail_fast) {
        for (std::size_t i = 0; i < rep.rows.size(); ++i)
            if (rep.rows[i].status == RowStatus::fail) {
                rep.rows.resize(i + 1);
                break;
            }
    }
    finalize_report(rep);
    return rep;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string status_cell(const SweepRow& r) {
    switch (r.status) {
        case RowStatus::pass: return "true";
        case RowStatus::fail: return "false";
        case RowStatus::skip: {
            auto colon = r.reason.find(':');
            return "skip(" + r.reason.substr(0, colon) + ")";
        }
    }
    return "";
}

}  // namespace detail

inline std::string csv_text(const SweepReport& rep) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += detail::csv_escape(cells[i]);
        }
        out += '\n';
    };
    line(rep.header);
    for (const auto& r : rep.rows) {
        std::vector<std::string> cells = r.cells;
        cells.push_back(detail::status_cell(r));
        cells.push_back(rep.timing ? fmt_ms(r.wall_ms) : "");
        line(cells);
    }
    return out;
}

// Writes the report as UTF-8 CSV; an empty path or "-" writes to stdout.
inline void emit_csv(const SweepReport& rep, const std::string& path) {
    const std::string text = csv_text(rep);
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing CSV to stdout");
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, any = false;
    auto end_record = [&] {
        record.push_back(field);
        field.clear();
        if (t.header.empty()) t.header = std::move(record);
        else t.rows.push_back(std::move(record));
        record.clear();
        any = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            record.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n') {
            end_record();
        } else if (c != '\r') {
            field += c;
            any = true;
        }
    }
    if (quoted) throw IoError("unterminated quoted CSV field");
    if (any || !field.empty()) end_record();
    return t;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

// Pass/fail/skip counts recovered from the pass column.
inline SweepSummary csv_summary(const CsvTable& t) {
    std::size_t col = t.header.size();
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == "pass") col = i;
    if (col == t.header.size()) throw IoError("CSV has no pass column");
    SweepSummary s;
    for (const auto& r : t.rows) {
        if (col >= r.size()) throw IoError("CSV row is shorter than the header");
        const std::string& v = r[col];
        if (v == "true") ++s.pass;
        else if (v == "false") ++s.fail;
        else if (v.rfind("skip", 0) == 0) ++s.skip;
        else throw IoError("unrecognised pass cell '" + v + "'");
    }
    return s;
}

}  // namespace qscaled
