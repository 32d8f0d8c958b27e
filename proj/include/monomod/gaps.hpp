#pragma once

#include <vector>

#include "monomod/sequence.hpp"

namespace monomod::gaps {

using seq::Mod1Sequence;

// Fraction of the N circular nearest-neighbor gaps (wraparound included) that
// are strictly smaller than s/N. Requires s > 0, N >= 2.
double gap_cdf(const Mod1Sequence& seq, double s);

// Alternating partial sums of 1 - e^{-s}:
//   lower = sum_{k=1}^{2K} (-1)^{k+1} s^k / k!
//   upper = sum_{k=1}^{2K-1} (-1)^{k+1} s^k / k!
// Requires s > 0, K >= 1.
std::pair<double, double> taylor_sandwich(double s, int K);

struct GapReport {
    long N = 0;
    std::vector<double> s_grid;
    std::vector<double> p_values;
    std::vector<double> lower, upper;  // Taylor sandwich at the given K
    std::vector<double> exp_ref;       // 1 - e^{-s}
};

GapReport gap_report(const Mod1Sequence& seq, const std::vector<double>& s_grid, int K);

// "lo:hi:step" -> grid values lo, lo+step, ..., <= hi (+ tolerance)
std::vector<double> parse_grid(const std::string& spec);

}  // namespace monomod::gaps
