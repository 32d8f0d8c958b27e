#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace monomod::seq {

// Dilation alpha for x(n) = alpha * n^d mod 1.
struct AlphaSpec {
    enum class Kind { Rational, Sqrt, Decimal, Random };

    Kind kind = Kind::Rational;
    mpq_class rational;      // Rational: alpha itself; Sqrt: the radicand (> 0)
    std::string decimal;     // Decimal: the literal digit string
    std::uint64_t seed = 0;  // Random
    long bits = 0;           // Random: numerator bit count

    static AlphaSpec from_rational(const mpq_class& q);
    // sqrt of a positive rational; a perfect-square radicand is normalized
    // to the Rational kind.
    static AlphaSpec from_sqrt(const mpq_class& radicand);
    static AlphaSpec from_decimal(const std::string& digits);
    static AlphaSpec from_random(std::uint64_t seed, long bits);

    // SPEC grammar: rat:p/q | sqrt:p/q | dec:0.123... | rand:SEED
    // (rand uses default bits for the d/N passed alongside at generate time;
    //  parse stores bits=0 meaning "derive from d and N").
    static AlphaSpec parse(const std::string& spec);

    std::string to_string() const;

    // Nearest integer to alpha * 2^prec. Throws PrecisionError for a Decimal
    // alpha with too few digits for the requested precision.
    mpz_class fixed_point(long prec) const;
};

struct Mod1Sequence {
    AlphaSpec alpha;
    int d = 0;
    long N = 0;
    long precision = 64;              // certified absolute accuracy, bits
    std::vector<mpq_class> exact;     // certified values in [0,1)
    std::vector<double> values;       // nearest-double cache of `exact`

    // Round-half-even image of the values on the 2^-64 grid (wraps 1 -> 0).
    std::vector<std::uint64_t> fixed64() const;

    // Injects externally supplied points in [0,1); used by statistics that
    // operate on arbitrary point sets (i.i.d. baselines, lattices).
    static Mod1Sequence from_values(std::vector<double> vals);
};

// smallest k with 2^k >= N
long ceil_log2(long N);

// d * ceil(log2 N) + 64: dyadic-random alpha bit budget
long required_alpha_bits(int d, long N);

// generate x(n) = alpha n^d mod 1 for n = 1..N at certified precision.
// min_working_bits only raises the internal working precision (testing hook).
Mod1Sequence generate(const AlphaSpec& alpha, int d, long N, int workers = 1,
                      long min_working_bits = 0);

// Uniform dyadic rational in [0,1) with required_alpha_bits(d,N) bits,
// deterministic in seed.
AlphaSpec sample_alpha(std::uint64_t seed, int d, long N);

}  // namespace monomod::seq
