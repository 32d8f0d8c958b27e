#include "cli.hpp"

#include <mpfr.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "monomod/correlation.hpp"
#include "monomod/counting.hpp"
#include "monomod/errors.hpp"
#include "monomod/exponents.hpp"
#include "monomod/fourier.hpp"
#include "monomod/gaps.hpp"
#include "monomod/sequence.hpp"

namespace monomod::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

struct Global {
    std::uint64_t seed = 0;
    int workers = 1;
    std::string out;
    std::string format;  // empty = per-command default
};

void atomic_write(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << content;
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("cannot write " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string mpq_decimal(const mpq_class& q, int digits) {
    mpfr_t x;
    mpfr_init2(x, 128);
    mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rf", digits, x);
    std::string out(s);
    mpfr_free_str(s);
    mpfr_clear(x);
    return out;
}

std::string resolve_format(const Global& g, const std::string& cmd) {
    std::string fmt = g.format.empty() ? (cmd == "gaps" ? "csv" : "json") : g.format;
    if (fmt != "json" && fmt != "csv")
        throw std::invalid_argument("format: must be json or csv");
    if (fmt == "csv" && cmd != "gaps")
        throw std::invalid_argument("format: csv is only available for gaps");
    return fmt;
}

json envelope(const std::string& cmd, const Global& g, json config, json result) {
    config["seed"] = g.seed;
    config["workers"] = g.workers;
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = cmd;
    doc["config"] = std::move(config);
    doc["result"] = std::move(result);
    return doc;
}

void emit_json(const Global& g, const json& doc) {
    atomic_write(g.out, doc.dump(2) + "\n");
}

int run_exponents(const Global& g, const std::string& d_str, long n, int m) {
    resolve_format(g, "exponents");
    mpz_class d;
    if (d.set_str(d_str, 10) != 0)
        throw std::invalid_argument("exponents: bad integer for --d: " + d_str);
    auto rep = exponents::report(d, n, m);
    json result;
    result["d"] = d.get_str();
    result["n"] = n;
    result["m"] = m;
    result["L"] = rep.L.get_str();
    result["phi"] = rep.phi.decimal;
    result["argmax_s"] = rep.phi.argmax_s;
    result["d_ell_for_n"] = rep.d_ell_for_n.get_str();
    if (rep.threshold_defined)
        result["threshold"] = rep.threshold;
    else
        result["threshold"] = nullptr;
    emit_json(g, envelope("exponents", g,
                          json{{"d", d_str}, {"n", n}, {"m", m}}, result));
    return 0;
}

int run_sequence(const Global& g, const std::string& alpha_str, int d, long N) {
    resolve_format(g, "sequence");
    auto alpha = seq::AlphaSpec::parse(alpha_str);
    auto s = seq::generate(alpha, d, N, g.workers);
    std::string body;
    body.reserve(static_cast<size_t>(N) * 24);
    for (const auto& v : s.exact) {
        body += mpq_decimal(v, 21);
        body += '\n';
    }
    atomic_write(g.out, body);
    return 0;
}

int run_correlate(const Global& g, const std::string& alpha_str, int d, long N, int ell,
                  const std::string& support, double fejer_width,
                  const std::string& algorithm) {
    resolve_format(g, "correlate");
    auto alpha = seq::AlphaSpec::parse(alpha_str);
    auto s = seq::generate(alpha, d, N, g.workers);
    corr::TestFunction f;
    if (fejer_width > 0) {
        if (!support.empty())
            throw std::invalid_argument("correlate: --support and --fejer are exclusive");
        f = corr::TestFunction::fejer_box(ell - 1, fejer_width);
    } else {
        if (support.empty()) throw std::invalid_argument("correlate: need --support or --fejer");
        f = corr::TestFunction::parse_support(support);
    }
    corr::CorrelationResult r;
    bool use_windowed = algorithm == "windowed" || (algorithm == "auto" && f.all_indicator());
    if (use_windowed)
        r = corr::r_ell_windowed(s, ell, f, g.workers);
    else
        r = corr::r_ell_naive(s, ell, f, g.workers);
    json result;
    result["value"] = r.value;
    result["expectation"] = r.expectation;
    result["tuple_count"] = r.tuple_count;
    result["N"] = r.N;
    result["ell"] = r.ell;
    result["runtime_ms"] = r.runtime_ms;
    json config{{"alpha", alpha_str}, {"d", d}, {"N", N}, {"ell", ell},
                {"algorithm", use_windowed ? "windowed" : "naive"}};
    if (fejer_width > 0)
        config["fejer"] = fejer_width;
    else
        config["support"] = support;
    emit_json(g, envelope("correlate", g, config, result));
    return 0;
}

int run_gaps(const Global& g, const std::string& alpha_str, int d, long N,
             const std::string& grid, int K) {
    std::string fmt = resolve_format(g, "gaps");
    auto alpha = seq::AlphaSpec::parse(alpha_str);
    auto s = seq::generate(alpha, d, N, g.workers);
    auto s_grid = gaps::parse_grid(grid);
    auto rep = gaps::gap_report(s, s_grid, K);
    if (fmt == "csv") {
        std::ostringstream os;
        os << std::setprecision(17);
        os << "s,p_n,lower,upper,exp_ref\n";
        for (size_t i = 0; i < rep.s_grid.size(); ++i)
            os << rep.s_grid[i] << ',' << rep.p_values[i] << ',' << rep.lower[i] << ','
               << rep.upper[i] << ',' << rep.exp_ref[i] << '\n';
        atomic_write(g.out, os.str());
        return 0;
    }
    json result;
    result["N"] = rep.N;
    result["s_grid"] = rep.s_grid;
    result["p_values"] = rep.p_values;
    result["lower"] = rep.lower;
    result["upper"] = rep.upper;
    result["exp_ref"] = rep.exp_ref;
    emit_json(g, envelope("gaps", g,
                          json{{"alpha", alpha_str}, {"d", d}, {"N", N},
                               {"s_grid", grid}, {"K", K}},
                          result));
    return 0;
}

int run_count(const Global& g, const std::string& coeffs, int d, long B, bool naive,
              const std::string& points_file, long long max_half_cells) {
    resolve_format(g, "count");
    auto form = counting::DiagonalForm::parse(coeffs, d);
    counting::EnumerationBudget budget;
    if (max_half_cells > 0) budget.max_half_cells = max_half_cells;
    auto rep = counting::count_report(form, B, budget, g.workers, naive);
    if (!points_file.empty()) {
        auto pts = naive ? counting::enumerate_points_naive(form, B)
                         : counting::enumerate_points(form, B, budget, g.workers);
        std::string body;
        for (const auto& p : pts) {
            for (size_t i = 0; i < p.coords.size(); ++i) {
                if (i) body += ',';
                body += std::to_string(p.coords[i]);
            }
            body += '\n';
        }
        atomic_write(points_file, body);
    }
    json strata;
    strata["in_w"] = rep.in_w;
    strata["no_vanishing_subsum"] = rep.no_vanishing_subsum;
    strata["other_subsum"] = rep.other_subsum;
    json pairs = json::object();
    for (const auto& [s, c] : rep.by_binary_pairs) pairs[std::to_string(s)] = c;
    strata["by_binary_pairs"] = pairs;
    json expos = json::object();
    if (rep.phi) expos["phi"] = *rep.phi;
    if (rep.subsum_free_exponent) expos["subsum_free_exponent"] = *rep.subsum_free_exponent;
    json result;
    result["B"] = rep.B;
    result["total"] = rep.total;
    result["m"] = rep.m;
    result["strata"] = strata;
    result["exponents"] = expos;
    result["log_B"] = rep.log_b;
    emit_json(g, envelope("count", g,
                          json{{"a", coeffs}, {"d", d}, {"B", B}, {"naive", naive}},
                          result));
    return 0;
}

int run_fourier_check(const Global& g, int d, int ell, long N, double width,
                      const std::string& alpha_str, double tolerance) {
    resolve_format(g, "fourier-check");
    auto alpha = alpha_str.empty() ? seq::sample_alpha(g.seed, d, N)
                                   : seq::AlphaSpec::parse(alpha_str);
    auto s = seq::generate(alpha, d, N, g.workers);
    auto f = corr::TestFunction::fejer_box(ell - 1, width);
    auto chk = fourier::poisson_identity_check(s, ell, f, tolerance);
    json result;
    result["lhs"] = chk.lhs;
    result["rhs"] = chk.rhs;
    result["diff"] = chk.diff;
    result["tail"] = chk.tail;
    result["pass"] = chk.diff <= tolerance + chk.tail;
    emit_json(g, envelope("fourier-check", g,
                          json{{"d", d}, {"ell", ell}, {"N", N}, {"A", width},
                               {"alpha", alpha.to_string()}, {"tolerance", tolerance}},
                          result));
    return 0;
}

int run_mc(const Global& g, const std::string& mode, int d, int ell, long N, int trials,
           const std::string& support, double fejer_width) {
    resolve_format(g, "mc");
    corr::TestFunction f;
    if (fejer_width > 0) {
        f = corr::TestFunction::fejer_box(ell - 1, fejer_width);
    } else if (!support.empty()) {
        f = corr::TestFunction::parse_support(support);
    } else {
        std::vector<std::pair<double, double>> box(static_cast<size_t>(ell - 1), {-0.5, 0.5});
        f = corr::TestFunction::indicator_box(box);
    }
    json config{{"mode", mode}, {"d", d}, {"ell", ell}, {"N", N}, {"trials", trials}};
    if (fejer_width > 0)
        config["fejer"] = fejer_width;
    else if (!support.empty())
        config["support"] = support;
    json result;
    if (mode == "mean") {
        auto st = fourier::expectation_mc(d, ell, f, N, trials, g.seed, g.workers);
        result["mean"] = st.mean;
        result["stderr"] = st.stderr_;
        result["trials"] = st.trials;
    } else if (mode == "var") {
        auto st = fourier::variance_mc(d, ell, f, N, trials, g.seed, g.workers);
        result["second_moment"] = st.second_moment;
        result["mean_squared"] = st.mean_squared;
        result["excess"] = st.excess;
        result["trials"] = st.trials;
    } else {
        throw std::invalid_argument("mc: mode must be mean or var");
    }
    emit_json(g, envelope("mc", g, config, result));
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"local statistics of alpha n^d mod 1 and diagonal-form point counts"};
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    app.add_option("--seed", g.seed, "global RNG seed");
    app.add_option("--workers", g.workers, "worker thread count")->check(CLI::Range(1, 256));
    app.add_option("--out", g.out, "output file path (default stdout)");
    app.add_option("--format", g.format, "json or csv (csv: gaps only)");
    app.set_config("--config", "", "flat key=value config merged under explicit flags");

    auto* c_exp = app.add_subcommand("exponents", "L(d,n), phi(m,d,n), d_ell and the threshold");
    std::string exp_d;
    long exp_n = 0;
    int exp_m = 0;
    c_exp->add_option("--d", exp_d, "degree (arbitrary size integer)")->required();
    c_exp->add_option("--n", exp_n, "number of variables minus one")->required();
    c_exp->add_option("--m", exp_m, "disjoint power-pair count")->required();

    auto* c_seq = app.add_subcommand("sequence", "emit alpha n^d mod 1, one value per line");
    std::string sq_alpha;
    int sq_d = 2;
    long sq_N = 0;
    c_seq->add_option("--alpha", sq_alpha, "rat:p/q | sqrt:p/q | dec:0.123... | rand:SEED")
        ->required();
    c_seq->add_option("--d", sq_d, "exponent d >= 2")->required();
    c_seq->add_option("--N", sq_N, "sequence length")->required();

    auto* c_corr = app.add_subcommand("correlate", "ell-point correlation R_ell^N");
    std::string co_alpha, co_support, co_algorithm = "auto";
    int co_d = 2, co_ell = 2;
    long co_N = 0;
    double co_fejer = 0.0;
    c_corr->add_option("--alpha", co_alpha, "alpha spec")->required();
    c_corr->add_option("--d", co_d, "exponent")->required();
    c_corr->add_option("--N", co_N, "sequence length")->required();
    c_corr->add_option("--ell", co_ell, "correlation order")->required();
    c_corr->add_option("--support", co_support, "indicator box: a1,b1;a2,b2;...");
    c_corr->add_option("--fejer", co_fejer, "Fejer factor width (alternative to --support)");
    c_corr->add_option("--algorithm", co_algorithm, "auto | naive | windowed")
        ->check(CLI::IsMember({"auto", "naive", "windowed"}));

    auto* c_gaps = app.add_subcommand("gaps", "nearest-neighbor gap distribution");
    std::string ga_alpha, ga_grid = "0.1:4.0:0.1";
    int ga_d = 2, ga_K = 3;
    long ga_N = 0;
    c_gaps->add_option("--alpha", ga_alpha, "alpha spec")->required();
    c_gaps->add_option("--d", ga_d, "exponent")->required();
    c_gaps->add_option("--N", ga_N, "sequence length")->required();
    c_gaps->add_option("--s-grid", ga_grid, "lo:hi:step");
    c_gaps->add_option("--K", ga_K, "Taylor sandwich order");

    auto* c_count = app.add_subcommand("count", "stratified rational point count");
    std::string ct_a, ct_points;
    int ct_d = 2;
    long ct_B = 0;
    bool ct_naive = false;
    long long ct_budget = 0;
    c_count->add_option("--a", ct_a, "comma-separated nonzero coefficients")->required();
    c_count->add_option("--d", ct_d, "degree")->required();
    c_count->add_option("--B", ct_B, "height bound")->required();
    c_count->add_flag("--naive", ct_naive, "full sweep instead of meet-in-the-middle");
    c_count->add_option("--emit-points", ct_points, "write one point per line to FILE");
    c_count->add_option("--max-half-cells", ct_budget, "enumeration work budget override");

    auto* c_fc = app.add_subcommand("fourier-check", "finite Poisson-summation identity");
    int fc_d = 2, fc_ell = 2;
    long fc_N = 0;
    double fc_A = 1.0, fc_tol = 1e-8;
    std::string fc_alpha;
    c_fc->add_option("--d", fc_d, "exponent")->required();
    c_fc->add_option("--ell", fc_ell, "correlation order")->required();
    c_fc->add_option("--N", fc_N, "sequence length")->required();
    c_fc->add_option("--A", fc_A, "Fejer width")->required();
    c_fc->add_option("--alpha", fc_alpha, "alpha spec (default: sampled from --seed)");
    c_fc->add_option("--tolerance", fc_tol, "identity tolerance");

    auto* c_mc = app.add_subcommand("mc", "Monte-Carlo mean/variance of R_ell^N over alpha");
    std::string mc_mode, mc_support;
    int mc_d = 2, mc_ell = 2, mc_trials = 0;
    long mc_N = 0;
    double mc_fejer = 0.0;
    c_mc->add_option("--mode", mc_mode, "mean | var")
        ->required()
        ->check(CLI::IsMember({"mean", "var"}));
    c_mc->add_option("--d", mc_d, "exponent")->required();
    c_mc->add_option("--ell", mc_ell, "correlation order")->required();
    c_mc->add_option("--N", mc_N, "sequence length")->required();
    c_mc->add_option("--trials", mc_trials, "trial count")->required();
    c_mc->add_option("--support", mc_support, "indicator box (default [-1/2,1/2]^(ell-1))");
    c_mc->add_option("--fejer", mc_fejer, "Fejer width (alternative to --support)");

    try {
        std::vector<std::string> argv(args.rbegin(), args.rend());
        app.parse(argv);
        if (app.got_subcommand(c_exp)) return run_exponents(g, exp_d, exp_n, exp_m);
        if (app.got_subcommand(c_seq)) return run_sequence(g, sq_alpha, sq_d, sq_N);
        if (app.got_subcommand(c_corr))
            return run_correlate(g, co_alpha, co_d, co_N, co_ell, co_support, co_fejer,
                                 co_algorithm);
        if (app.got_subcommand(c_gaps)) return run_gaps(g, ga_alpha, ga_d, ga_N, ga_grid, ga_K);
        if (app.got_subcommand(c_count))
            return run_count(g, ct_a, ct_d, ct_B, ct_naive, ct_points, ct_budget);
        if (app.got_subcommand(c_fc))
            return run_fourier_check(g, fc_d, fc_ell, fc_N, fc_A, fc_alpha, fc_tol);
        if (app.got_subcommand(c_mc))
            return run_mc(g, mc_mode, mc_d, mc_ell, mc_N, mc_trials, mc_support, mc_fejer);
        std::cerr << app.help() << std::endl;
        return 2;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << std::endl;
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource budget exceeded: " << e.what() << std::endl;
        return 3;
    } catch (const IndeterminateError& e) {
        std::cerr << "indeterminate at maximum precision: " << e.what() << std::endl;
        return 3;
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << std::endl;
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << std::endl;
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid argument: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}

}  // namespace monomod::cli
