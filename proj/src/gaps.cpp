#include "monomod/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace monomod::gaps {

double gap_cdf(const Mod1Sequence& seq, double s) {
    if (!(s > 0)) throw std::invalid_argument("gap_cdf: s must be positive");
    const long N = seq.N;
    if (N < 2) throw std::invalid_argument("gap_cdf: need N >= 2");
    // exact comparison N * gap < s, with s read as the exact binary rational
    std::vector<mpq_class> u = seq.exact;
    std::sort(u.begin(), u.end());
    mpq_class sq(s);
    long count = 0;
    for (long i = 0; i + 1 < N; ++i)
        if ((u[static_cast<size_t>(i + 1)] - u[static_cast<size_t>(i)]) * N < sq) ++count;
    // close the circle with the wraparound gap
    if ((u.front() + 1 - u.back()) * N < sq) ++count;
    return static_cast<double>(count) / static_cast<double>(N);
}

std::pair<double, double> taylor_sandwich(double s, int K) {
    if (!(s > 0)) throw std::invalid_argument("taylor_sandwich: s must be positive");
    if (K < 1) throw std::invalid_argument("taylor_sandwich: K must be >= 1");
    double term = s;  // s^k / k!
    double partial = 0.0;
    double upper = 0.0;
    for (int k = 1; k <= 2 * K; ++k) {
        partial += (k % 2 == 1) ? term : -term;
        if (k == 2 * K - 1) upper = partial;
        term *= s / static_cast<double>(k + 1);
    }
    return {partial, upper};
}

GapReport gap_report(const Mod1Sequence& seq, const std::vector<double>& s_grid, int K) {
    GapReport rep;
    rep.N = seq.N;
    rep.s_grid = s_grid;
    for (double s : s_grid) {
        rep.p_values.push_back(gap_cdf(seq, s));
        auto [lo, up] = taylor_sandwich(s, K);
        rep.lower.push_back(lo);
        rep.upper.push_back(up);
        rep.exp_ref.push_back(1.0 - std::exp(-s));
    }
    return rep;
}

std::vector<double> parse_grid(const std::string& spec) {
    auto c1 = spec.find(':');
    auto c2 = spec.rfind(':');
    if (c1 == std::string::npos || c2 == c1)
        throw std::invalid_argument("grid: expected lo:hi:step");
    double lo = std::stod(spec.substr(0, c1));
    double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    double step = std::stod(spec.substr(c2 + 1));
    if (!(step > 0) || hi < lo) throw std::invalid_argument("grid: need step > 0 and hi >= lo");
    std::vector<double> out;
    for (long i = 0;; ++i) {
        double s = lo + step * static_cast<double>(i);
        if (s > hi + step * 1e-9) break;
        out.push_back(s);
    }
    return out;
}

}  // namespace monomod::gaps
