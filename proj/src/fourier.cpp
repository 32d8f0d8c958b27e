#include "monomod/fourier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "monomod/counting.hpp"
#include "monomod/errors.hpp"
#include "monomod/parallel.hpp"

namespace monomod::fourier {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double half_cells(int ell, long cutoff) {
    return std::pow(2.0 * static_cast<double>(cutoff) + 1.0, ell - 1);
}

// All set partitions of {0..n-1}, each as a list of blocks.
std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> current;
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            out.push_back(current);
            return;
        }
        // index loop: recursion appends blocks to current, invalidating references
        size_t blocks = current.size();
        for (size_t k = 0; k < blocks; ++k) {
            current[k].push_back(i);
            self(self, i + 1);
            current[k].pop_back();
        }
        current.push_back({i});
        self(self, i + 1);
        current.pop_back();
    };
    rec(rec, 0);
    return out;
}

// Max number of disjoint pairs (i, j) with -a_i * a_j a d-th power. The raw
// product, not the gcd-reduced one: the cardinality bound needs this predicate.
int raw_matching(const std::vector<long long>& a, int d) {
    int n = static_cast<int>(a.size());
    std::vector<unsigned> adj(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            mpz_class prod = mpz_class(static_cast<long>(-a[static_cast<size_t>(i)])) *
                             static_cast<long>(a[static_cast<size_t>(j)]);
            if (counting::is_dth_power(prod, d)) {
                adj[static_cast<size_t>(i)] |= 1u << j;
                adj[static_cast<size_t>(j)] |= 1u << i;
            }
        }
    std::vector<int> best(static_cast<size_t>(1) << n, 0);
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        int i = std::countr_zero(mask);
        int b = best[mask & (mask - 1)];  // leave i unmatched
        unsigned rest = mask & ~(1u << i);
        unsigned cand = adj[static_cast<size_t>(i)] & rest;
        while (cand) {
            int j = std::countr_zero(cand);
            cand &= cand - 1;
            b = std::max(b, 1 + best[rest & ~(1u << j)]);
        }
        best[mask] = b;
    }
    return best[(1u << n) - 1];
}

}  // namespace

FrequencySet build_frequency_set(int ell, long cutoff, std::optional<int> d,
                                 std::optional<int> m, long long budget) {
    if (ell < 2 || ell > 6) throw std::invalid_argument("frequency set: need 2 <= ell <= 6");
    if (cutoff < 1) throw std::invalid_argument("frequency set: cutoff must be >= 1");
    if (m && !d) throw std::invalid_argument("frequency set: m filter requires d");
    if (half_cells(ell, cutoff) > static_cast<double>(budget))
        throw ResourceError("frequency set: (2*cutoff+1)^(ell-1) exceeds the cell budget");

    FrequencySet fs;
    fs.ell = ell;
    fs.cutoff = cutoff;
    fs.d = d;
    fs.m = m;

    std::vector<long long> a(static_cast<size_t>(ell), -cutoff);
    for (;;) {
        long long sum = 0;
        bool all_zero = true;
        for (int i = 0; i + 1 < ell; ++i) {
            sum += a[static_cast<size_t>(i)];
            if (a[static_cast<size_t>(i)] != 0) all_zero = false;
        }
        if (!all_zero) {
            a[static_cast<size_t>(ell - 1)] = -sum;
            bool keep = true;
            if (m) {
                for (int i = 0; i < ell && keep; ++i)
                    if (a[static_cast<size_t>(i)] == 0) keep = false;
                if (keep) keep = raw_matching(a, *d) == *m;
            }
            if (keep) fs.vectors.push_back(a);
        }
        int pos = ell - 2;
        while (pos >= 0 && a[static_cast<size_t>(pos)] == cutoff) {
            a[static_cast<size_t>(pos)] = -cutoff;
            --pos;
        }
        if (pos < 0) break;
        ++a[static_cast<size_t>(pos)];
    }
    return fs;
}

unsigned long long count_frequency_set(int ell, long cutoff, int d, int m, int workers) {
    if (ell < 2 || ell > 4)
        throw std::invalid_argument("frequency count: fast path covers 2 <= ell <= 4");
    if (cutoff < 1) throw std::invalid_argument("frequency count: cutoff must be >= 1");
    if (d < 2) throw std::invalid_argument("frequency count: need d >= 2");
    if (m < 0 || 2 * m > ell) return 0;

    const long c = cutoff;
    const long lmax = (ell - 1) * c;  // closing coordinate range
    const long long maxprod = static_cast<long long>(c) * lmax;

    // d-th powers up to maxprod (absolute value; sign handled by parity of d)
    std::vector<char> is_pow(static_cast<size_t>(maxprod) + 1, 0);
    is_pow[0] = 1;
    for (long long t = 1;; ++t) {
        long long p = 1;
        bool over = false;
        for (int i = 0; i < d; ++i) {
            if (p > maxprod / t) {
                over = true;
                break;
            }
            p *= t;
        }
        if (over) break;
        is_pow[static_cast<size_t>(p)] = 1;
    }
    auto dth = [&](long long z) {
        if (z >= 0) return is_pow[static_cast<size_t>(z)] != 0;
        return d % 2 == 1 && is_pow[static_cast<size_t>(-z)] != 0;
    };

    // pair predicate over (u, v), |u| <= c, |v| <= lmax, both nonzero
    const size_t urange = static_cast<size_t>(2 * c + 1);
    const size_t vrange = static_cast<size_t>(2 * lmax + 1);
    std::vector<char> pt(urange * vrange, 0);
    for (long u = -c; u <= c; ++u) {
        if (u == 0) continue;
        for (long v = -lmax; v <= lmax; ++v) {
            if (v == 0) continue;
            long long prod = -static_cast<long long>(u) * v;
            if (dth(prod))
                pt[static_cast<size_t>(u + c) * vrange + static_cast<size_t>(v + lmax)] = 1;
        }
    }
    auto pp = [&](long u, long v) {
        return pt[static_cast<size_t>(u + c) * vrange + static_cast<size_t>(v + lmax)] != 0;
    };

    const long side = 2 * c + 1;
    std::vector<unsigned long long> partial(64, 0);
    for_chunks(side, workers, 64, [&](int chunk, long lo, long hi) {
        unsigned long long cnt = 0;
        for (long i1 = lo; i1 < hi; ++i1) {
            long a1 = i1 - c;
            if (a1 == 0) continue;
            if (ell == 2) {
                long a2 = -a1;
                int mm = pp(a1, a2) ? 1 : 0;
                if (mm == m) ++cnt;
                continue;
            }
            for (long a2 = -c; a2 <= c; ++a2) {
                if (a2 == 0) continue;
                if (ell == 3) {
                    long a3 = -a1 - a2;
                    if (a3 == 0 || std::labs(a3) > lmax) continue;
                    int mm = (pp(a1, a2) || pp(a1, a3) || pp(a2, a3)) ? 1 : 0;
                    if (mm == m) ++cnt;
                    continue;
                }
                bool p12 = pp(a1, a2);
                for (long a3 = -c; a3 <= c; ++a3) {
                    if (a3 == 0) continue;
                    long a4 = -a1 - a2 - a3;
                    if (a4 == 0 || std::labs(a4) > lmax) continue;
                    bool p13 = pp(a1, a3), p23 = pp(a2, a3);
                    bool p14 = pp(a1, a4), p24 = pp(a2, a4), p34 = pp(a3, a4);
                    int mm;
                    if ((p12 && p34) || (p13 && p24) || (p14 && p23))
                        mm = 2;
                    else if (p12 || p13 || p14 || p23 || p24 || p34)
                        mm = 1;
                    else
                        mm = 0;
                    if (mm == m) ++cnt;
                }
            }
        }
        partial[static_cast<size_t>(chunk)] += cnt;
    });
    unsigned long long total = 0;
    for (auto v : partial) total += v;
    return total;
}

PoissonCheck poisson_identity_check(const Mod1Sequence& seq_in, int ell, const TestFunction& f,
                                    double tolerance) {
    if (ell < 2 || ell > 4) throw std::invalid_argument("identity check: need 2 <= ell <= 4");
    if (f.arity() != ell - 1) throw std::invalid_argument("identity check: arity must be ell-1");
    if (!f.all_fejer()) throw std::invalid_argument("identity check: Fejer factors only");
    const long N = seq_in.N;
    if (N < ell || N > 60) throw std::invalid_argument("identity check: need ell <= N <= 60");
    if (!(tolerance > 0)) throw std::invalid_argument("identity check: tolerance must be > 0");

    auto direct = corr::r_ell_naive(seq_in, ell, f);
    if (direct.k_tail > 0.5 * tolerance)
        throw PrecisionError(
            "identity check: k-truncation tail " + std::to_string(direct.k_tail) +
            " exceeds the tolerance; choose widths with integral A*N");

    // frequency side: E[f] over distinct tuples plus the nonzero-frequency sum
    const int arity = ell - 1;
    std::vector<long> M(static_cast<size_t>(arity));
    double cells = 1.0;
    for (int i = 0; i < arity; ++i) {
        M[static_cast<size_t>(i)] =
            static_cast<long>(std::floor(f.factors[static_cast<size_t>(i)].width *
                                             static_cast<double>(N) +
                                         1e-9));
        cells *= 2.0 * static_cast<double>(M[static_cast<size_t>(i)]) + 1.0;
    }
    if (cells > 2e7) throw ResourceError("identity check: frequency grid too large");

    double dfall = 1.0;  // N (N-1) ... (N-ell+1)
    for (int i = 0; i < ell; ++i) dfall *= static_cast<double>(N - i);
    const double ninv = std::pow(static_cast<double>(N), -ell);

    auto partitions = set_partitions(ell);
    std::vector<double> part_weight(partitions.size());
    for (size_t p = 0; p < partitions.size(); ++p) {
        double w = 1.0;
        for (const auto& block : partitions[p]) {
            int sz = static_cast<int>(block.size());
            double fact = 1.0;
            for (int k = 2; k < sz; ++k) fact *= static_cast<double>(k);
            w *= (sz % 2 == 1 ? 1.0 : -1.0) * fact;
        }
        part_weight[p] = w;
    }

    std::unordered_map<long long, std::complex<double>> power_sums;
    auto S = [&](long long t) -> std::complex<double> {
        if (t == 0) return {static_cast<double>(N), 0.0};
        long long key = std::llabs(t);
        auto it = power_sums.find(key);
        if (it == power_sums.end()) {
            std::complex<double> acc{0.0, 0.0};
            for (long n = 1; n <= N; ++n) {
                double arg = kTwoPi * static_cast<double>(key) *
                             seq_in.values[static_cast<size_t>(n - 1)];
                acc += std::complex<double>(std::cos(arg), std::sin(arg));
            }
            it = power_sums.emplace(key, acc).first;
        }
        return t > 0 ? it->second : std::conj(it->second);
    };

    std::vector<long> b(static_cast<size_t>(arity));
    for (int i = 0; i < arity; ++i) b[static_cast<size_t>(i)] = -M[static_cast<size_t>(i)];
    std::vector<long long> cvec(static_cast<size_t>(ell));
    KahanSum freq_sum;
    for (;;) {
        bool all_zero = true;
        double w = 1.0;
        for (int i = 0; i < arity; ++i) {
            long bi = b[static_cast<size_t>(i)];
            if (bi != 0) all_zero = false;
            w *= std::max(0.0, 1.0 - std::abs(static_cast<double>(bi)) /
                                         (f.factors[static_cast<size_t>(i)].width *
                                          static_cast<double>(N)));
        }
        if (!all_zero && w > 0.0) {
            cvec[0] = b[0];
            for (int j = 1; j < arity; ++j)
                cvec[static_cast<size_t>(j)] =
                    b[static_cast<size_t>(j)] - b[static_cast<size_t>(j - 1)];
            cvec[static_cast<size_t>(ell - 1)] = -b[static_cast<size_t>(arity - 1)];
            std::complex<double> tstar{0.0, 0.0};
            for (size_t p = 0; p < partitions.size(); ++p) {
                std::complex<double> prod{part_weight[p], 0.0};
                for (const auto& block : partitions[p]) {
                    long long t = 0;
                    for (int i : block) t += cvec[static_cast<size_t>(i)];
                    prod *= S(t);
                }
                tstar += prod;
            }
            freq_sum.add(w * tstar.real());
        }
        int pos = arity - 1;
        while (pos >= 0 && b[static_cast<size_t>(pos)] == M[static_cast<size_t>(pos)]) {
            b[static_cast<size_t>(pos)] = -M[static_cast<size_t>(pos)];
            --pos;
        }
        if (pos < 0) break;
        ++b[static_cast<size_t>(pos)];
    }

    PoissonCheck out;
    out.lhs = direct.value;
    out.rhs = f.expectation() * dfall * ninv + ninv * freq_sum.sum;
    out.diff = std::abs(out.lhs - out.rhs);
    out.tail = direct.k_tail;
    return out;
}

namespace {

std::vector<double> mc_trials(int d, int ell, const TestFunction& f, long N, int trials,
                              std::uint64_t seed, int workers,
                              const std::optional<AlphaSpec>& fixed_alpha) {
    if (trials < 1) throw std::invalid_argument("mc: trials must be >= 1");
    if (f.arity() != ell - 1) throw std::invalid_argument("mc: arity must be ell-1");
    std::vector<double> vals(static_cast<size_t>(trials));
    const std::uint64_t base = splitmix64(seed);
    const bool indicator = f.all_indicator();
    for_chunks(trials, workers, 64, [&](int, long lo, long hi) {
        for (long t = lo; t < hi; ++t) {
            AlphaSpec alpha =
                fixed_alpha ? *fixed_alpha
                            : seq::sample_alpha(splitmix64(base ^ static_cast<std::uint64_t>(t)),
                                                d, N);
            Mod1Sequence s = seq::generate(alpha, d, N, 1);
            auto r = indicator ? corr::r_ell_windowed(s, ell, f, 1)
                               : corr::r_ell_naive(s, ell, f, 1);
            vals[static_cast<size_t>(t)] = r.value;
        }
    });
    return vals;
}

}  // namespace

McStats expectation_mc(int d, int ell, const TestFunction& f, long N, int trials,
                       std::uint64_t seed, int workers, std::optional<AlphaSpec> fixed_alpha) {
    McStats out;
    out.per_trial = mc_trials(d, ell, f, N, trials, seed, workers, fixed_alpha);
    out.trials = trials;
    KahanSum acc;
    for (double v : out.per_trial) acc.add(v);
    out.mean = acc.sum / static_cast<double>(trials);
    if (trials > 1) {
        KahanSum sq;
        for (double v : out.per_trial) sq.add((v - out.mean) * (v - out.mean));
        out.stderr_ = std::sqrt(sq.sum / static_cast<double>(trials - 1) /
                                static_cast<double>(trials));
    }
    return out;
}

VarStats variance_mc(int d, int ell, const TestFunction& f, long N, int trials,
                     std::uint64_t seed, int workers, std::optional<AlphaSpec> fixed_alpha) {
    auto vals = mc_trials(d, ell, f, N, trials, seed, workers, fixed_alpha);
    VarStats out;
    out.trials = trials;
    KahanSum m1, m2;
    for (double v : vals) {
        m1.add(v);
        m2.add(v * v);
    }
    double mean = m1.sum / static_cast<double>(trials);
    out.second_moment = m2.sum / static_cast<double>(trials);
    out.mean_squared = mean * mean;
    out.excess = out.second_moment - out.mean_squared;
    return out;
}

CoefficientTable coefficient_table(int d, int ell, long N, double fejer_width,
                                   bool nonzero_only) {
    if (ell != 2 && ell != 3)
        throw std::invalid_argument("coefficient table: ell must be 2 or 3");
    if (N < ell || N > 30) throw std::invalid_argument("coefficient table: need ell <= N <= 30");
    if (!(fejer_width > 0)) throw std::invalid_argument("coefficient table: width must be > 0");
    if (d < 1) throw std::invalid_argument("coefficient table: need d >= 1");

    // powers n^d must stay well inside 64-bit range with the frequency scale
    const long M = static_cast<long>(std::floor(fejer_width * static_cast<double>(N) + 1e-9));
    mpz_class top;
    mpz_ui_pow_ui(top.get_mpz_t(), static_cast<unsigned long>(N), static_cast<unsigned long>(d));
    top *= 4 * static_cast<long>(M);
    if (mpz_sizeinbase(top.get_mpz_t(), 2) > 62)
        throw ResourceError("coefficient table: degree too large for 64-bit frequencies");

    std::vector<long long> pw(static_cast<size_t>(N) + 1, 0);
    for (long n = 1; n <= N; ++n) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(d));
        pw[static_cast<size_t>(n)] = static_cast<long long>(p.get_si());
    }

    const int arity = ell - 1;
    double tuples = 1.0, bcells = 1.0;
    for (int i = 0; i < ell; ++i) tuples *= static_cast<double>(N - i);
    for (int i = 0; i < arity; ++i) bcells *= 2.0 * static_cast<double>(M) + 1.0;
    if (tuples * bcells > 5e8) throw ResourceError("coefficient table: grid too large");

    CoefficientTable out;
    out.N = N;
    out.ell = ell;
    out.d = d;
    out.nonzero_only = nonzero_only;

    const double an = fejer_width * static_cast<double>(N);
    const double scale = std::pow(static_cast<double>(N), -ell);
    auto add_tuples = [&](const std::vector<long long>& c, double w) {
        if (ell == 2) {
            for (long n1 = 1; n1 <= N; ++n1)
                for (long n2 = 1; n2 <= N; ++n2) {
                    if (n2 == n1) continue;
                    long long u = c[0] * pw[static_cast<size_t>(n1)] +
                                  c[1] * pw[static_cast<size_t>(n2)];
                    out.entries[u] += w;
                }
        } else {
            for (long n1 = 1; n1 <= N; ++n1)
                for (long n2 = 1; n2 <= N; ++n2) {
                    if (n2 == n1) continue;
                    for (long n3 = 1; n3 <= N; ++n3) {
                        if (n3 == n1 || n3 == n2) continue;
                        long long u = c[0] * pw[static_cast<size_t>(n1)] +
                                      c[1] * pw[static_cast<size_t>(n2)] +
                                      c[2] * pw[static_cast<size_t>(n3)];
                        out.entries[u] += w;
                    }
                }
        }
    };

    std::vector<long long> c(static_cast<size_t>(ell));
    for (long b1 = -M; b1 <= M; ++b1) {
        double w1 = std::max(0.0, 1.0 - std::abs(static_cast<double>(b1)) / an);
        if (ell == 2) {
            if (b1 == 0 || w1 <= 0.0) continue;
            c[0] = b1;
            c[1] = -b1;
            add_tuples(c, w1);
        } else {
            for (long b2 = -M; b2 <= M; ++b2) {
                if (b1 == 0 && b2 == 0) continue;
                double w = w1 * std::max(0.0, 1.0 - std::abs(static_cast<double>(b2)) / an);
                if (w <= 0.0) continue;
                c[0] = b1;
                c[1] = b2 - b1;
                c[2] = -b2;
                if (nonzero_only && (c[0] == 0 || c[1] == 0 || c[2] == 0)) continue;
                add_tuples(c, w);
            }
        }
    }
    for (auto& [u, v] : out.entries) v *= scale;
    out.degree_bound = 0;
    for (const auto& [u, v] : out.entries)
        out.degree_bound = std::max(out.degree_bound, std::llabs(u));
    return out;
}

}  // namespace monomod::fourier
