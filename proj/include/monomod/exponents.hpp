#pragma once

#include <gmpxx.h>

#include <string>

namespace monomod::exponents {

/// L(d,n) = 1 + 2(d-n+1)/(n^2-n) as an exact rational. Requires n >= 2.
mpq_class l_of(const mpz_class& d, long n);

struct PhiResult {
    double value = 0.0;       // certified upper bound
    double lower = 0.0;       // certified lower bound
    int argmax_s = 0;         // smallest maximizing s
    std::string decimal;      // upper bound as a decimal string
};

/// phi(m,d,n) = max over integer s in [0,m] of
///   s + sum_{r=1}^{n-2s-1} (r+1) * L(d,n)^{-1/r},
/// with the r=1 root read as L itself, empty sums equal to 0, and directed
/// rounding so that [lower, value] brackets the exact maximum with width
/// below 2^{-precision/2}. Requires 0 <= m <= (n+1)/2 and d > n >= 2.
PhiResult phi_of(int m, const mpz_class& d, int n, long precision = 128);

/// (2*ell)^(4*ell), exactly. Requires ell >= 2.
mpz_class d_ell(int ell);

/// True iff phi(0,d,ell) < 1, decided by interval arithmetic with escalating
/// precision. Requires d > ell >= 2. Throws IndeterminateError if the interval
/// still straddles 1 at the maximum precision.
bool poissonian_threshold(const mpz_class& d, int ell);

struct ExponentReport {
    mpz_class d;
    long n = 0;
    int m = 0;
    mpq_class L;
    PhiResult phi;
    mpz_class d_ell_for_n;
    bool threshold = false;
    bool threshold_defined = false;  // threshold requires d > n
};

ExponentReport report(const mpz_class& d, long n, int m, long precision = 128);

}  // namespace monomod::exponents
