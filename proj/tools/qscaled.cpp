#include "qscaled/verify.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

using namespace qscaled;

namespace {

struct Globals {
    long precision = 256;
    long max_terms = PrecisionContext::default_max_terms;
    std::string out;
    bool fail_fast = false;
    int jobs = 1;
    bool timing = false;
};

// "2", "-0.5", "3i", "-i", "1+2i", "0.5-1e-3i" -> (re, im) decimal strings
std::pair<std::string, std::string> parse_complex(const std::string& s) {
    auto check = [&](const std::string& part) {
        std::size_t pos = 0;
        try {
            std::stod(part, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (part.empty() || pos != part.size()) throw ConfigurationError("cannot parse complex number '" + s + "'");
        return part;
    };
    if (s.empty() || s.back() != 'i') return {check(s), "0"};
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < body.size(); ++i)
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') split = i;
    std::string re = split == std::string::npos ? "0" : check(body.substr(0, split));
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+") im = "1";
    else if (im == "-") im = "-1";
    return {re, check(im)};
}

Complex to_complex_value(const std::string& s) {
    auto [re, im] = parse_complex(s);
    return Complex(Real(re), Real(im));
}

void print_summary(const SweepReport& rep) {
    std::cerr << "pass=" << rep.summary.pass << " fail=" << rep.summary.fail << " skip=" << rep.summary.skip;
    if (rep.worst_case) std::cerr << " worst_row=" << *rep.worst_case + 1 << " worst_ratio=" << rep.rows[*rep.worst_case].ratio;
    std::cerr << "\n";
    for (const auto& r : rep.rows)
        if (r.status == RowStatus::fail && !r.reason.empty()) std::cerr << "failure: " << r.reason << "\n";
}

int run(SweepTarget target, std::vector<GridPoint> grid, const Globals& g) {
    SweepConfig cfg;
    cfg.target = target;
    cfg.grid = std::move(grid);
    cfg.precision_bits = g.precision;
    cfg.max_terms = g.max_terms;
    cfg.output_path = g.out;
    cfg.fail_fast = g.fail_fast;
    cfg.jobs = g.jobs;
    cfg.timing = g.timing;
    SweepReport rep = run_sweep(cfg);
    emit_csv(rep, cfg.output_path);
    print_summary(rep);
    return exit_code(rep);
}

int eval_function(const std::string& fn, const std::map<std::string, std::string>& args, const Globals& g) {
    PrecisionContext ctx(g.precision, PrecisionContext::default_guard_bits, g.max_terms);
    ScopedPrecision sp(ctx.working_bits());
    auto get = [&](const std::string& k) -> const std::string& {
        auto it = args.find(k);
        if (it == args.end() || it->second.empty()) throw ConfigurationError("eval --fn " + fn + " needs --" + k);
        return it->second;
    };
    auto has = [&](const std::string& k) { return args.count(k) && !args.at(k).empty(); };
    auto qp = [&] { return QPoint(Real(get("q"))); };
    auto nval = [&] { return std::stol(get("n")); };

    LogComplex r;
    if (fn == "Eq") r = euler_Eq(to_complex_value(get("z")), qp(), ctx);
    else if (fn == "gammaq") r = q_gamma(Real(get("x")), qp(), ctx);
    else if (fn == "Aq") r = ramanujan_Aq(to_complex_value(get("z")), qp(), ctx);
    else if (fn == "J2") r = jackson_J2(to_complex_value(get("z")), Real(get("nu")), qp(), ctx);
    else if (fn == "SW") r = stieltjes_wigert(to_complex_value(get("z")), nval(), qp(), ctx);
    else if (fn == "qLaguerre")
        r = q_laguerre(to_complex_value(get("z")), PolynomialSpec(nval(), Real(get("alpha"))), qp(), ctx);
    else if (fn.size() == 6 && fn.rfind("theta", 0) == 0 && fn[5] >= '1' && fn[5] <= '4') {
        int kind = fn[5] - '0';
        Complex v = has("tau") ? theta(kind, to_complex_value(has("v") ? get("v") : "0"), to_complex_value(get("tau")), ctx)
                               : theta_z(kind, to_complex_value(get("z")), qp(), ctx);
        r = logc_from_complex(v);
    } else if (fn == "eta") r = dedekind_eta_log(to_complex_value(get("tau")), ctx);
    else throw ConfigurationError("unknown function '" + fn + "'");

    Complex c = to_complex(r);
    std::string text = "fn,log_mag,phase,re,im\n" + fn + "," + fmt(r.log_mag) + "," + fmt(r.phase) + "," +
                       fmt(c.re) + "," + fmt(c.im) + "\n";
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
    } else {
        std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
        if (!f || !(f << text)) throw IoError("cannot write '" + g.out + "'");
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification harness for scaled q-series asymptotics"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--precision", g.precision, "Working precision in bits")->capture_default_str();
    app.add_option("--max-terms", g.max_terms, "Cap on series and product lengths")->capture_default_str();
    app.add_option("--out", g.out, "CSV output path (default stdout)");
    app.add_flag("--fail-fast", g.fail_fast, "Stop after the first failing row");
    app.add_option("--jobs", g.jobs, "Worker threads")->capture_default_str();
    app.add_flag("--timing", g.timing, "Fill the wall_ms column (output is no longer reproducible)");

    // verify
    auto* verify = app.add_subcommand("verify", "Run a verification sweep");
    verify->require_subcommand(1);
    verify->fallthrough();
    auto* v_l1 = verify->add_subcommand("lemma1", "Remainder bounds for the tails of (a;q)_inf");
    auto* v_l2 = verify->add_subcommand("lemma2", "Scaled (q;q)_inf against its modular main term");
    auto* v_th = verify->add_subcommand("theta", "Theta triple-product, modular and eta identities");
    int theta_count = 100;
    std::uint64_t theta_seed = 20240611;
    v_th->add_option("--count", theta_count, "Number of random points")->capture_default_str();
    v_th->add_option("--seed", theta_seed, "Random seed")->capture_default_str();

    auto* v_thm = verify->add_subcommand("theorem", "Theta representations or scaled limits of one family");
    std::string thm_id;
    bool rep_mode = false, scaled_mode = false;
    std::string a_exp = "0.4", nu = "0.5", alpha = "0.5";
    std::vector<std::string> us{"0", "0.3"}, qs{"0.3", "0.5"}, zs{"2", "1+i", "0.5"};
    std::vector<long> ns{16, 32, 64, 128};
    long span = 16;
    v_thm->add_option("--id", thm_id, "Family: euler, qgamma, aq, bessel, sw, laguerre")->required();
    auto* o_rep = v_thm->add_flag("--rep", rep_mode, "Check the exact theta representation bound");
    auto* o_scaled = v_thm->add_flag("--scaled", scaled_mode, "Compare against the scaled main terms");
    o_rep->excludes(o_scaled);
    v_thm->add_option("--a", a_exp, "Scaling exponent a in (0, 1/2)")->capture_default_str();
    v_thm->add_option("--u", us, "Shift values")->delimiter(',');
    v_thm->add_option("--n", ns, "Ascending n values")->delimiter(',');
    v_thm->add_option("--q", qs, "Nomes for --rep")->delimiter(',');
    v_thm->add_option("--z", zs, "Complex z values for --rep, e.g. 2 or 1+i")->delimiter(',');
    v_thm->add_option("--span", span, "Rows past the regime gate for --rep")->capture_default_str();
    v_thm->add_option("--nu", nu, "Bessel order")->capture_default_str();
    v_thm->add_option("--alpha", alpha, "Laguerre parameter")->capture_default_str();

    auto* v_orth = verify->add_subcommand("orthogonality", "Orthogonality of SW or q-Laguerre polynomials");
    std::string family, orth_q = "0.5", tolerance = "1e-8";
    long max_degree = 3;
    v_orth->add_option("--family", family, "sw or qlaguerre")->required();
    v_orth->add_option("--q", orth_q, "Nome")->capture_default_str();
    v_orth->add_option("--alpha", alpha, "q-Laguerre parameter")->capture_default_str();
    v_orth->add_option("--max-degree", max_degree, "Largest degree")->capture_default_str();
    v_orth->add_option("--tolerance", tolerance, "Relative tolerance")->capture_default_str();

    // rate-fit
    auto* rf = app.add_subcommand("rate-fit", "Fit the decay rate of a scaled limit");
    rf->fallthrough();
    std::vector<std::string> rf_ids;
    rf->add_option("--id", rf_ids, "Scaled limit names, e.g. euler-positive, or 'all'")->required()->delimiter(',');
    rf->add_option("--a", a_exp, "Scaling exponent")->capture_default_str();
    rf->add_option("--u", us, "Shift values")->delimiter(',');
    rf->add_option("--n", ns, "Ascending n values (at least three)")->delimiter(',');
    rf->add_option("--nu", nu, "Bessel order")->capture_default_str();
    rf->add_option("--alpha", alpha, "Laguerre parameter")->capture_default_str();

    // eval
    auto* ev = app.add_subcommand("eval", "Evaluate a single function");
    ev->fallthrough();
    std::string fn;
    std::map<std::string, std::string> eargs;
    ev->add_option("--fn", fn, "Eq, gammaq, Aq, J2, SW, qLaguerre, theta1..theta4, eta")->required();
    for (const char* k : {"q", "z", "x", "n", "nu", "alpha", "v", "tau"})
        ev->add_option(std::string("--") + k, eargs[k], std::string("Argument ") + k);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_configuration;
    }

    try {
        if (*v_l1) return run(SweepTarget::lemma1, default_grid_lemma1(g.precision), g);
        if (*v_l2) return run(SweepTarget::lemma2, default_grid_lemma2(), g);
        if (*v_th) return run(SweepTarget::theta_identities, default_grid_theta(theta_count, theta_seed), g);
        if (*v_thm) {
            TheoremFamily f = parse_theorem(thm_id);
            if (rep_mode == scaled_mode) throw ConfigurationError("verify theorem needs exactly one of --rep or --scaled");
            if (rep_mode) {
                std::vector<std::pair<std::string, std::string>> zz;
                for (const auto& z : zs) zz.push_back(parse_complex(z));
                std::string extra = f == TheoremFamily::bessel ? nu : alpha;
                return run(SweepTarget::theorem_rep, grid_theorem_rep(f, qs, zz, span, extra, g.precision), g);
            }
            return run(SweepTarget::theorem_scaled, grid_scaled(limits_of(f), a_exp, us, ns, nu, alpha), g);
        }
        if (*v_orth)
            return run(SweepTarget::orthogonality,
                       grid_orthogonality(parse_family(family), orth_q, alpha, max_degree, tolerance), g);
        if (*rf) {
            std::vector<ScaledLimit> limits;
            for (const auto& id : rf_ids) {
                if (id == "all") limits.insert(limits.end(), all_scaled_limits.begin(), all_scaled_limits.end());
                else limits.push_back(parse_limit(id));
            }
            return run(SweepTarget::rate_fit, grid_rate_fit(limits, a_exp, us, ns, nu, alpha), g);
        }
        if (*ev) return eval_function(fn, eargs, g);
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return exit_resource;
    } catch (const ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_configuration;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return exit_configuration;
    } catch (const DomainError& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return exit_configuration;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_configuration;
    }
    return exit_configuration;
}
