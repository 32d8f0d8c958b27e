// Acceptance gate: one line per criterion, PASS or FAIL, nonzero exit when
// anything fails. Tolerances are pinned here, not configurable.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "monomod/correlation.hpp"
#include "monomod/counting.hpp"
#include "monomod/exponents.hpp"
#include "monomod/fourier.hpp"
#include "monomod/gaps.hpp"
#include "monomod/sequence.hpp"

using namespace monomod;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("criterion %d: %s - %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. windowed vs naive correlation, 200 random instances, <= 1e-12, <= 2 min
void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(10001);
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        int ell = 2 + static_cast<int>(rng() % 3);
        long N = 30 + static_cast<long>(rng() % 271);  // <= 300
        int d = 2 + static_cast<int>(rng() % 10);
        auto s = seq::generate(seq::sample_alpha(rng(), d, N), d, N, 8);
        std::vector<std::pair<double, double>> box;
        for (int i = 0; i + 1 < ell; ++i) {
            double width = 0.2 + 4.0 * static_cast<double>(rng() % 1000) / 1000.0;
            double center = 3.0 * (static_cast<double>(rng() % 2000) / 1000.0 - 1.0);
            double lo = center - width / 2, hi = center + width / 2;
            double edge = N / 2.0 - 0.51;
            if (hi > edge) { hi = edge; lo = hi - width; }
            if (lo < -edge) { lo = -edge; hi = lo + width; }
            box.emplace_back(lo, hi);
        }
        auto f = corr::TestFunction::indicator_box(box);
        auto a = corr::r_ell_naive(s, ell, f, 8);
        auto b = corr::r_ell_windowed(s, ell, f, 8);
        if (std::abs(a.value - b.value) > 1e-12 || a.tuple_count != b.tuple_count) ++bad;
    }
    double t = elapsed_s(t0);
    std::ostringstream os;
    os << "windowed vs naive correlation, 200 instances, " << bad << " mismatches, "
       << t << "s";
    report(1, bad == 0 && t <= 120.0, os.str());
}

// 2. meet-in-the-middle vs naive enumeration, 100 random forms, exact, <= 5 min
void criterion2() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(10002);
    int bad = 0;
    const int dchoices[3] = {3, 5, 7};
    for (int trial = 0; trial < 100; ++trial) {
        int nv = 4 + static_cast<int>(rng() % 2);  // n in {3,4}
        int d = dchoices[rng() % 3];
        long B = 1 + static_cast<long>(rng() % 12);
        std::vector<mpz_class> a;
        for (int j = 0; j < nv; ++j) {
            long c = static_cast<long>(rng() % 19) - 9;
            if (c == 0) c = 1;
            a.emplace_back(c);
        }
        counting::DiagonalForm form(a, d);
        if (counting::enumerate_points(form, B, {}, 8) !=
            counting::enumerate_points_naive(form, B))
            ++bad;
    }
    double t = elapsed_s(t0);
    std::ostringstream os;
    os << "meet-in-the-middle vs naive enumeration, 100 forms, " << bad
       << " mismatches, " << t << "s";
    report(2, bad == 0 && t <= 300.0, os.str());
}

// 3. two_var_count <= 8B+1 and equals brute force, 200 random instances
void criterion3() {
    std::mt19937_64 rng(10003);
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
        long a = static_cast<long>(rng() % 101) - 50;
        long b = static_cast<long>(rng() % 101) - 50;
        if (a == 0) a = 3;
        if (b == 0) b = -3;
        int d = 2 + static_cast<int>(rng() % 8);  // <= 9
        long B = 1 + static_cast<long>(rng() % 100);
        auto res = counting::two_var_count(mpz_class(a), mpz_class(b), d, B);
        long long brute = 0;
        for (long x = -B; x <= B; ++x)
            for (long y = -B; y <= B; ++y) {
                mpz_class xp, yp, xz(x), yz(y);
                mpz_pow_ui(xp.get_mpz_t(), xz.get_mpz_t(), static_cast<unsigned long>(d));
                mpz_pow_ui(yp.get_mpz_t(), yz.get_mpz_t(), static_cast<unsigned long>(d));
                if (mpz_class(a) * xp == mpz_class(b) * yp) ++brute;
            }
        if (res.count != brute || !res.bound_ok || res.count > 8 * B + 1) ++bad;
    }
    std::ostringstream os;
    os << "two-variable count vs brute force and the 8B+1 bound, 200 instances, "
       << bad << " mismatches";
    report(3, bad == 0, os.str());
}

// 4. Poisson summation identity, 50 instances, <= 1e-8, <= 3 min
void criterion4() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(10004);
    int bad = 0;
    const double widths[4] = {0.5, 1.0, 1.5, 2.0};
    for (int trial = 0; trial < 50; ++trial) {
        int ell = 2 + static_cast<int>(rng() % 2);  // <= 3
        long N = 2 * (5 + static_cast<long>(rng() % 16));  // even, 10..40
        int d = 2 + static_cast<int>(rng() % 9);
        double A = widths[rng() % 4];  // A*N integral: exact k-sum, zero tail
        auto s = seq::generate(seq::sample_alpha(rng(), d, N), d, N, 8);
        auto f = corr::TestFunction::fejer_box(ell - 1, A);
        auto chk = fourier::poisson_identity_check(s, ell, f, 1e-8);
        if (chk.diff > 1e-8 + chk.tail) ++bad;
    }
    double t = elapsed_s(t0);
    std::ostringstream os;
    os << "Poisson summation identity, 50 instances, " << bad << " over tolerance, "
       << t << "s";
    report(4, bad == 0 && t <= 180.0, os.str());
}

// 5. pair correlation mean over 60 random alpha, d=11, N=2000, <= 10 min
void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    auto f = corr::TestFunction::indicator_box({{-0.5, 0.5}});
    auto st = fourier::expectation_mc(11, 2, f, 2000, 60, 20250823, 8);
    double t = elapsed_s(t0);
    bool pass = std::abs(st.mean - 1.0) <= 3.0 * st.stderr_ && t <= 600.0;
    std::ostringstream os;
    os << "pair correlation mean " << st.mean << " +- " << st.stderr_
       << " vs 1 over 60 trials, " << t << "s";
    report(5, pass, os.str());
}

// 6. Taylor sandwich on the grid and the iid gap statistic
void criterion6() {
    bool sandwich_ok = true;
    for (int i = 1; i <= 40; ++i) {
        double s = 0.1 * i;
        for (int K = 1; K <= 6; ++K) {
            auto [lo, up] = gaps::taylor_sandwich(s, K);
            double ref = 1.0 - std::exp(-s);
            if (!(lo <= ref + 1e-14 && ref <= up + 1e-14)) sandwich_ok = false;
        }
    }
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed * 7919 + 13);
        std::vector<double> v;
        for (int i = 0; i < 2000; ++i)
            v.push_back(static_cast<double>(rng() >> 11) * 0x1p-53);
        double p = gaps::gap_cdf(seq::Mod1Sequence::from_values(v), 1.0);
        if (p >= 0.632 - 0.05 && p <= 0.632 + 0.05) ++inside;
    }
    std::ostringstream os;
    os << "Taylor sandwich grid " << (sandwich_ok ? "ok" : "violated")
       << "; iid P_N(1) inside the band in " << inside << "/100 seeds";
    report(6, sandwich_ok && inside >= 95, os.str());
}

// 7. stratification dominance for a=(1,-1,1,-1), d=9, B in {10,15,20}
void criterion7() {
    auto t0 = std::chrono::steady_clock::now();
    counting::DiagonalForm form({1, -1, 1, -1}, 9);
    std::vector<long> bs{10, 15, 20};
    bool small_free = true;
    std::vector<double> lx, ly;
    std::ostringstream detail;
    for (long B : bs) {
        auto rep = counting::count_report(form, B, {}, 8);
        if (rep.total == 0 ||
            static_cast<double>(rep.no_vanishing_subsum) > 0.05 * static_cast<double>(rep.total))
            small_free = false;
        long long pairs2 = rep.by_binary_pairs.count(2) ? rep.by_binary_pairs.at(2) : 0;
        detail << " B=" << B << ":" << pairs2 << "/" << rep.total;
        if (pairs2 > 0) {
            lx.push_back(std::log(static_cast<double>(B)));
            ly.push_back(std::log(static_cast<double>(pairs2)));
        }
    }
    double slope = 0.0;
    bool slope_ok = false;
    if (lx.size() == 3) {
        double mx = (lx[0] + lx[1] + lx[2]) / 3.0, my = (ly[0] + ly[1] + ly[2]) / 3.0;
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 3; ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        slope = num / den;
        slope_ok = std::abs(slope - 2.0) <= 0.3;
    }
    double t = elapsed_s(t0);
    std::ostringstream os;
    os << "stratification: subsum-free <= 5% " << (small_free ? "ok" : "violated")
       << ", binary-pair slope " << slope << detail.str() << ", " << t << "s";
    report(7, small_free && slope_ok && t <= 600.0, os.str());
}

// 8. exponent calculus: exact values, thresholds, monotonicity grids, <= 1 min
void criterion8() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    ok &= exponents::l_of(3, 3) == mpq_class(4, 3);
    ok &= exponents::l_of(11, 4) == mpq_class(7, 3);
    ok &= exponents::d_ell(3) == mpz_class("2176782336");
    for (int ell : {3, 4, 5})
        ok &= exponents::poissonian_threshold(exponents::d_ell(ell) + 1, ell);

    for (long n = 2; n <= 20 && ok; ++n) {
        mpq_class prev_l = exponents::l_of(2, n);
        for (long d = 3; d <= 200; ++d) {
            mpq_class cur = exponents::l_of(d, n);
            if (cur <= prev_l) ok = false;
            prev_l = cur;
        }
    }
    for (int n = 2; n <= 20 && ok; ++n) {
        for (int d = n + 1; d <= 200; d += 7) {
            double prev_m = -1.0;
            for (int m = 0; 2 * m <= n + 1; ++m) {
                auto p = exponents::phi_of(m, d, n);
                if (p.value < m || p.value < prev_m) ok = false;
                prev_m = p.value;
            }
            if (d + 1 <= 200 &&
                exponents::phi_of(0, d + 1, n).value > exponents::phi_of(0, d, n).value + 1e-15)
                ok = false;
        }
    }
    double t = elapsed_s(t0);
    std::ostringstream os;
    os << "exponent calculus exact values and monotonicity grids, " << t << "s";
    report(8, ok && t <= 60.0, os.str());
}

// 9. CLI determinism: run twice, workers 1 vs 8; integers identical, reals
// within 1e-12; runtime_ms is timing metadata and excluded
bool json_close(const json& a, const json& b) {
    if (a.is_object() && b.is_object()) {
        if (a.size() != b.size()) return false;
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (it.key() == "runtime_ms") continue;
            if (!b.contains(it.key())) return false;
            if (!json_close(it.value(), b.at(it.key()))) return false;
        }
        return true;
    }
    if (a.is_array() && b.is_array()) {
        if (a.size() != b.size()) return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (!json_close(a[i], b[i])) return false;
        return true;
    }
    if (a.is_number_float() || b.is_number_float()) {
        if (!a.is_number() || !b.is_number()) return false;
        return std::abs(a.get<double>() - b.get<double>()) <= 1e-12;
    }
    return a == b;
}

void criterion9() {
    fs::path dir = fs::temp_directory_path() / ("monomod_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string cli = MONOMOD_CLI_PATH;

    struct Cmd {
        std::string name;
        std::string args;
        bool is_json;
    };
    std::vector<Cmd> cmds = {
        {"exponents", "exponents --d 50 --n 4 --m 2", true},
        {"sequence", "sequence --alpha sqrt:2/1 --d 3 --N 500", false},
        {"correlate",
         "correlate --alpha rand:11 --d 5 --N 400 --ell 3 --support \"-1.0,1.0;-0.5,0.5\"",
         true},
        {"gaps", "gaps --alpha rand:3 --d 4 --N 800 --s-grid 0.2:3.0:0.2 --K 4", false},
        {"count", "count --a 1,-1,2,-2,3 --d 5 --B 8", true},
        {"fourier-check", "fourier-check --d 3 --ell 2 --N 30 --A 1 --seed 6", true},
        {"mc", "mc --mode mean --d 5 --ell 2 --N 300 --trials 16 --seed 4", true},
    };

    bool all_ok = true;
    std::string first_bad;
    for (const auto& cmd : cmds) {
        std::vector<std::string> outs;
        bool run_ok = true;
        int variant = 0;
        for (const std::string& workers : {"1", "8", "1"}) {  // repeat + worker sweep
            fs::path out = dir / (cmd.name + "_" + std::to_string(variant++) + ".out");
            std::string full = "\"" + cli + "\" " + cmd.args + " --workers " + workers +
                               " --out \"" + out.string() + "\"";
            if (std::system(full.c_str()) != 0) {
                run_ok = false;
                break;
            }
            std::ifstream f(out);
            std::stringstream ss;
            ss << f.rdbuf();
            outs.push_back(ss.str());
        }
        bool same = run_ok && outs.size() == 3;
        if (same) {
            if (cmd.is_json) {
                json j0 = json::parse(outs[0]), j1 = json::parse(outs[1]),
                     j2 = json::parse(outs[2]);
                // worker count appears in the config echo by design
                j0["config"].erase("workers");
                j1["config"].erase("workers");
                j2["config"].erase("workers");
                same = json_close(j0, j1) && json_close(j0, j2);
            } else {
                same = outs[0] == outs[1] && outs[0] == outs[2];
            }
        }
        if (!same) {
            all_ok = false;
            if (first_bad.empty()) first_bad = cmd.name;
        }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    std::ostringstream os;
    os << "CLI determinism across reruns and workers 1 vs 8 over all 7 commands";
    if (!all_ok) os << " (first mismatch: " << first_bad << ")";
    report(9, all_ok, os.str());
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
