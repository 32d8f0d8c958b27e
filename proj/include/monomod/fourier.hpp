#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "monomod/correlation.hpp"
#include "monomod/sequence.hpp"
#include "monomod/test_function.hpp"

namespace monomod::fourier {

using corr::TestFunction;
using seq::AlphaSpec;
using seq::Mod1Sequence;

// Zero-sum frequency vectors (a_1..a_ell) with a_ell = -a_1-...-a_{ell-1},
// (a_1..a_{ell-1}) != 0 and |a_i| <= cutoff for i < ell. With m set, only
// vectors with all coordinates nonzero and exactly m disjoint d-th-power
// pairs are kept.
struct FrequencySet {
    int ell = 0;
    long cutoff = 0;
    std::optional<int> d;
    std::optional<int> m;
    std::vector<std::vector<long long>> vectors;
};

FrequencySet build_frequency_set(int ell, long cutoff, std::optional<int> d = {},
                                 std::optional<int> m = {}, long long budget = 5'000'000);

// |A_ell(cutoff, m)| without materializing; flat-table fast path, ell <= 4.
unsigned long long count_frequency_set(int ell, long cutoff, int d, int m, int workers = 1);

struct PoissonCheck {
    double lhs = 0.0;   // direct k-summed correlation
    double rhs = 0.0;   // expectation term + finite frequency-side sum
    double diff = 0.0;  // |lhs - rhs|
    double tail = 0.0;  // certified k-truncation tail carried by the lhs
};

// Exact finite Poisson-summation identity for Fejer product test functions:
// both sides of the Fourier expansion of R_ell^N, computed independently.
// Requires all factors Fejer, ell <= 4, N <= 60. Throws PrecisionError when
// the certified lhs tail alone exceeds the tolerance.
PoissonCheck poisson_identity_check(const Mod1Sequence& seq, int ell, const TestFunction& f,
                                    double tolerance);

struct McStats {
    double mean = 0.0;
    double stderr_ = 0.0;
    int trials = 0;
    std::vector<double> per_trial;
};

// Monte-Carlo average of R_ell^N over random alpha; deterministic in seed and
// worker-count independent. fixed_alpha pins alpha for every trial (testing).
McStats expectation_mc(int d, int ell, const TestFunction& f, long N, int trials,
                       std::uint64_t seed, int workers = 1,
                       std::optional<AlphaSpec> fixed_alpha = {});

struct VarStats {
    double second_moment = 0.0;
    double mean_squared = 0.0;
    double excess = 0.0;  // empirical variance of R_ell^N over alpha
    int trials = 0;
};

VarStats variance_mc(int d, int ell, const TestFunction& f, long N, int trials,
                     std::uint64_t seed, int workers = 1,
                     std::optional<AlphaSpec> fixed_alpha = {});

// Coefficients of the trigonometric polynomial alpha -> R_ell^N - E[f]:
// c_u = N^-ell sum*_n sum_{a != 0} fhat(a/N) [Q_a(n) = u]. Small N and
// ell in {2,3} only; nonzero_only restricts to frequency vectors with all
// coordinates nonzero.
struct CoefficientTable {
    long N = 0;
    int ell = 0;
    int d = 0;
    bool nonzero_only = false;
    std::map<long long, double> entries;
    long long degree_bound = 0;  // max |u| with a (potentially) nonzero entry
};

CoefficientTable coefficient_table(int d, int ell, long N, double fejer_width,
                                   bool nonzero_only = false);

}  // namespace monomod::fourier
