#include "monomod/sequence.hpp"

#include <mpfr.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "monomod/errors.hpp"
#include "monomod/parallel.hpp"

namespace monomod::seq {

namespace {

// Nearest integer to num/den, den > 0, ties away handled by exact halves
// rounding to even.
mpz_class div_round_nearest(const mpz_class& num, const mpz_class& den) {
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class twice = 2 * r;
    int c = cmp(twice, den);
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
    return q;
}

bool is_perfect_square(const mpz_class& z) {
    return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0;
}

}  // namespace

AlphaSpec AlphaSpec::from_rational(const mpq_class& q) {
    AlphaSpec a;
    a.kind = Kind::Rational;
    a.rational = q;
    a.rational.canonicalize();
    return a;
}

AlphaSpec AlphaSpec::from_sqrt(const mpq_class& radicand) {
    if (radicand <= 0) throw std::invalid_argument("sqrt alpha: radicand must be positive");
    mpq_class r = radicand;
    r.canonicalize();
    // sqrt(p/q) = sqrt(p*q)/q; rational exactly when p*q is a perfect square.
    mpz_class pq = r.get_num() * r.get_den();
    if (is_perfect_square(pq)) {
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), pq.get_mpz_t());
        return from_rational(mpq_class(root, r.get_den()));
    }
    AlphaSpec a;
    a.kind = Kind::Sqrt;
    a.rational = r;
    return a;
}

AlphaSpec AlphaSpec::from_decimal(const std::string& digits) {
    AlphaSpec a;
    a.kind = Kind::Decimal;
    a.decimal = digits;
    // validate now: sign, digits, at most one point
    size_t i = 0;
    if (i < digits.size() && (digits[i] == '+' || digits[i] == '-')) ++i;
    bool seen_digit = false, seen_point = false;
    for (; i < digits.size(); ++i) {
        if (digits[i] == '.') {
            if (seen_point) throw std::invalid_argument("decimal alpha: two points");
            seen_point = true;
        } else if (digits[i] >= '0' && digits[i] <= '9') {
            seen_digit = true;
        } else {
            throw std::invalid_argument("decimal alpha: bad character");
        }
    }
    if (!seen_digit) throw std::invalid_argument("decimal alpha: no digits");
    return a;
}

AlphaSpec AlphaSpec::from_random(std::uint64_t seed, long bits) {
    AlphaSpec a;
    a.kind = Kind::Random;
    a.seed = seed;
    a.bits = bits;
    return a;
}

AlphaSpec AlphaSpec::parse(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("alpha spec: missing ':'");
    std::string tag = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    if (tag == "rat" || tag == "sqrt") {
        mpq_class q;
        if (q.set_str(rest, 10) != 0) throw std::invalid_argument("alpha spec: bad rational " + rest);
        q.canonicalize();
        return tag == "rat" ? from_rational(q) : from_sqrt(q);
    }
    if (tag == "dec") return from_decimal(rest);
    if (tag == "rand") {
        std::uint64_t seed = std::stoull(rest);
        return from_random(seed, 0);
    }
    throw std::invalid_argument("alpha spec: unknown kind " + tag);
}

std::string AlphaSpec::to_string() const {
    switch (kind) {
        case Kind::Rational: return "rat:" + rational.get_str();
        case Kind::Sqrt: return "sqrt:" + rational.get_str();
        case Kind::Decimal: return "dec:" + decimal;
        case Kind::Random: return "rand:" + std::to_string(seed);
    }
    return "?";
}

mpz_class AlphaSpec::fixed_point(long prec) const {
    mpz_class two_prec = mpz_class(1) << prec;
    switch (kind) {
        case Kind::Rational:
            return div_round_nearest(rational.get_num() * two_prec, rational.get_den());
        case Kind::Sqrt: {
            mpfr_t x;
            mpfr_init2(x, prec + 64);
            mpfr_set_q(x, rational.get_mpq_t(), MPFR_RNDN);
            mpfr_sqrt(x, x, MPFR_RNDN);
            mpfr_mul_2si(x, x, prec, MPFR_RNDN);
            mpz_class out;
            mpfr_get_z(out.get_mpz_t(), x, MPFR_RNDN);
            mpfr_clear(x);
            return out;
        }
        case Kind::Decimal: {
            // alpha = D / 10^k; refuse when 10^-k is coarser than 2^-prec.
            std::string s = decimal;
            bool neg = false;
            if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
                neg = s[0] == '-';
                s.erase(0, 1);
            }
            auto point = s.find('.');
            long frac_digits = 0;
            if (point != std::string::npos) {
                frac_digits = static_cast<long>(s.size() - point - 1);
                s.erase(point, 1);
            }
            long needed = static_cast<long>(std::ceil(static_cast<double>(prec) * 0.30103)) + 1;
            if (frac_digits < needed)
                throw PrecisionError("decimal alpha has " + std::to_string(frac_digits) +
                                     " fractional digits; " + std::to_string(needed) +
                                     " are required for " + std::to_string(prec) +
                                     " bits of certified precision");
            mpz_class D(s, 10);
            if (neg) D = -D;
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
            return div_round_nearest(D * two_prec, den);
        }
        case Kind::Random: {
            if (bits <= 0) throw std::logic_error("random alpha: bit count not resolved");
            std::mt19937_64 rng(seed);
            mpz_class num = 0;
            for (long produced = 0; produced < bits; produced += 64) {
                num <<= 64;
                num += mpz_class(static_cast<unsigned long>(rng()));
            }
            // keep exactly `bits` low bits
            mpz_class mask = (mpz_class(1) << bits) - 1;
            num &= mask;
            // alpha = num / 2^bits
            if (prec >= bits) return num << (prec - bits);
            // round down-shift to nearest
            return div_round_nearest(num, mpz_class(1) << (bits - prec));
        }
    }
    throw std::logic_error("unreachable");
}

long ceil_log2(long N) {
    long k = 0;
    while ((1L << k) < N) ++k;
    return k;
}

long required_alpha_bits(int d, long N) { return static_cast<long>(d) * ceil_log2(N) + 64; }

std::vector<std::uint64_t> Mod1Sequence::fixed64() const {
    std::vector<std::uint64_t> out;
    out.reserve(exact.size());
    mpz_class two64 = mpz_class(1) << 64;
    for (const auto& v : exact) {
        mpz_class u = div_round_nearest(v.get_num() * two64, v.get_den());
        if (u >= two64) u -= two64;  // wrap values that round up to 1
        out.push_back(static_cast<std::uint64_t>(mpz_get_ui(u.get_mpz_t())));
    }
    return out;
}

Mod1Sequence Mod1Sequence::from_values(std::vector<double> vals) {
    Mod1Sequence s;
    s.d = 0;
    s.N = static_cast<long>(vals.size());
    s.precision = 64;
    s.exact.reserve(vals.size());
    for (double v : vals) {
        if (!(v >= 0.0 && v < 1.0)) throw std::invalid_argument("injected value outside [0,1)");
        s.exact.emplace_back(v);  // doubles are exact rationals
    }
    s.values = std::move(vals);
    return s;
}

Mod1Sequence generate(const AlphaSpec& alpha_in, int d, long N, int workers,
                      long min_working_bits) {
    if (d < 2) throw std::invalid_argument("generate: d must be >= 2");
    if (N < 1) throw std::invalid_argument("generate: N must be >= 1");

    AlphaSpec alpha = alpha_in;
    if (alpha.kind == AlphaSpec::Kind::Random && alpha.bits == 0)
        alpha.bits = required_alpha_bits(d, N);
    if (alpha.kind == AlphaSpec::Kind::Random && alpha.bits < required_alpha_bits(d, N))
        throw PrecisionError("random alpha has " + std::to_string(alpha.bits) +
                             " bits; generate(d=" + std::to_string(d) + ", N=" + std::to_string(N) +
                             ") needs >= " + std::to_string(required_alpha_bits(d, N)));

    Mod1Sequence s;
    s.alpha = alpha;
    s.d = d;
    s.N = N;
    s.precision = 64;
    s.exact.assign(static_cast<size_t>(N), mpq_class(0));

    if (alpha.kind == AlphaSpec::Kind::Rational) {
        // exact: alpha n^d mod 1 = (p n^d mod q) / q
        const mpz_class& p = alpha.rational.get_num();
        const mpz_class& q = alpha.rational.get_den();
        for_chunks(N, workers, 64, [&](int, long lo, long hi) {
            for (long n = lo; n < hi; ++n) {
                mpz_class nd;
                mpz_ui_pow_ui(nd.get_mpz_t(), static_cast<unsigned long>(n + 1),
                              static_cast<unsigned long>(d));
                mpz_class r = p * nd;
                mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t());
                s.exact[static_cast<size_t>(n)] = mpq_class(r, q);
                s.exact[static_cast<size_t>(n)].canonicalize();
            }
        });
    } else {
        long W = static_cast<long>(d) * ceil_log2(N) + 96;
        if (W < min_working_bits) W = min_working_bits;
        mpz_class F = alpha.fixed_point(W);
        mpz_class two_w = mpz_class(1) << W;
        mpz_class two_out = mpz_class(1) << s.precision;
        for_chunks(N, workers, 64, [&](int, long lo, long hi) {
            for (long n = lo; n < hi; ++n) {
                mpz_class nd;
                mpz_ui_pow_ui(nd.get_mpz_t(), static_cast<unsigned long>(n + 1),
                              static_cast<unsigned long>(d));
                mpz_class v = F * nd;
                mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), two_w.get_mpz_t());
                // round W-bit fraction to the certified output grid
                mpz_class u = div_round_nearest(v * two_out, two_w);
                if (u >= two_out) u -= two_out;
                s.exact[static_cast<size_t>(n)] = mpq_class(u, two_out);
                s.exact[static_cast<size_t>(n)].canonicalize();
            }
        });
    }

    s.values.reserve(static_cast<size_t>(N));
    for (const auto& v : s.exact) s.values.push_back(v.get_d());
    return s;
}

AlphaSpec sample_alpha(std::uint64_t seed, int d, long N) {
    return AlphaSpec::from_random(seed, required_alpha_bits(d, N));
}

}  // namespace monomod::seq
