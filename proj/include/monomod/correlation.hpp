#pragma once

#include "monomod/sequence.hpp"
#include "monomod/test_function.hpp"

namespace monomod::corr {

using seq::Mod1Sequence;

struct CorrelationResult {
    int ell = 0;
    long N = 0;
    double value = 0.0;            // R_ell^N
    long long tuple_count = 0;     // k-weighted distinct tuples (indicator case)
    double expectation = 0.0;      // integral of f
    double k_tail = 0.0;           // certified truncation tail (Fejer, non-integral A*N)
    double runtime_ms = 0.0;
};

// Reference evaluation of the ell-point correlation: direct sum over ordered
// distinct ell-tuples of the k-summed product test function applied to the
// N-scaled consecutive circle differences. Requires 2 <= ell <= 6, N >= ell,
// indicator supports inside [-N/2, N/2].
CorrelationResult r_ell_naive(const Mod1Sequence& seq, int ell, const TestFunction& f,
                              int workers = 1);

// Same value (within 1e-12; exactly, for indicator boxes) via sorted circular
// window search. Indicator factors only.
CorrelationResult r_ell_windowed(const Mod1Sequence& seq, int ell, const TestFunction& f,
                                 int workers = 1);

// Poissonian limit: integral of f.
double poisson_reference(const TestFunction& f);

// Number of integers k with lo <= N*(y+k) <= hi. Shared by both algorithms so
// boundary decisions coincide bit for bit.
int indicator_multiplicity(double y, double lo, double hi, long N);

// Sum over k of the Fejer factor at N*(y+k); exact closed form when A*N is
// integral, truncated with a certified tail bound otherwise (added to *tail).
double fejer_ksum(double y, double width, long N, double* tail);

}  // namespace monomod::corr
