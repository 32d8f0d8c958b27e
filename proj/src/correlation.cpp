#include "monomod/correlation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "monomod/parallel.hpp"

namespace monomod::corr {

namespace {

constexpr double kPi = std::numbers::pi;

void validate(const Mod1Sequence& seq, int ell, const TestFunction& f, bool windowed) {
    if (ell < 2 || ell > 6) throw std::invalid_argument("correlation: need 2 <= ell <= 6");
    if (seq.N < ell) throw std::invalid_argument("correlation: need N >= ell");
    if (f.arity() != ell - 1)
        throw std::invalid_argument("correlation: test function arity must be ell-1");
    double half = static_cast<double>(seq.N) / 2.0;
    for (const auto& fac : f.factors) {
        if (fac.kind == Factor::Kind::Indicator) {
            if (std::abs(fac.lo) > half || std::abs(fac.hi) > half)
                throw std::invalid_argument(
                    "correlation: indicator support must lie inside [-N/2, N/2] "
                    "(wraparound would double-count)");
        } else if (windowed) {
            throw std::invalid_argument("r_ell_windowed: indicator factors only");
        }
    }
}

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

struct FactorEval {
    // weight of coordinate difference y for factor i; integer multiplicity for
    // indicators, k-summed kernel value for Fejer.
    const TestFunction& f;
    long N;
    double tail_per_eval = 0.0;

    double eval(int i, double y, long long* int_weight) {
        const Factor& fac = f.factors[static_cast<size_t>(i)];
        if (fac.kind == Factor::Kind::Indicator) {
            int mult = indicator_multiplicity(y, fac.lo, fac.hi, N);
            *int_weight = mult;
            return static_cast<double>(mult);
        }
        *int_weight = 1;
        double tail = 0.0;
        double v = fejer_ksum(y, fac.width, N, &tail);
        tail_per_eval = std::max(tail_per_eval, tail);
        return v;
    }
};

}  // namespace

int indicator_multiplicity(double y, double lo, double hi, long N) {
    // k with N*(y+k) in [lo, hi]  <=>  k in [lo/N - y, hi/N - y]
    double n = static_cast<double>(N);
    double kmin = std::ceil(lo / n - y);
    double kmax = std::floor(hi / n - y);
    if (kmax < kmin) return 0;
    return static_cast<int>(kmax - kmin) + 1;
}

double fejer_ksum(double y, double width, long N, double* tail) {
    double M = width * static_cast<double>(N);
    double y_red = y - std::round(y);
    long Mi = std::lround(M);
    if (std::abs(M - static_cast<double>(Mi)) < 1e-12 && Mi >= 1) {
        // A*N integral: the k-series telescopes to the periodized Fejer kernel
        //   sum_k f(N(y+k)) = A sin^2(pi M y) / (M^2 sin^2(pi y)).
        double s = std::sin(kPi * y_red);
        if (std::abs(s) < 1e-300) return width;  // y integral: only k = -y survives
        double sM = std::sin(kPi * static_cast<double>(Mi) * y_red);
        double v = width * sM * sM / (static_cast<double>(Mi) * static_cast<double>(Mi) * s * s);
        return v;
    }
    // generic width: truncate at |k + round(y)| <= K with tail bound
    //   sum_{|j|>K} A / (pi A N (y_red+j))^2 <= 2 / (A pi^2 N^2 (K-1)).
    const double target = 1e-12;
    double n2 = static_cast<double>(N) * static_cast<double>(N);
    double want = 2.0 / (width * kPi * kPi * n2 * target);
    long K = want > 5e4 ? 50000 : static_cast<long>(std::ceil(want)) + 2;
    if (K < 4) K = 4;
    double sum = 0.0;
    for (long j = -K; j <= K; ++j) {
        double x = static_cast<double>(N) * (y_red + static_cast<double>(j));
        if (std::abs(x) < 1e-12) {
            sum += width;
            continue;
        }
        double t = std::sin(kPi * width * x) / (kPi * width * x);
        sum += width * t * t;
    }
    if (tail) *tail += 2.0 / (width * kPi * kPi * n2 * static_cast<double>(K - 1));
    return sum;
}

double poisson_reference(const TestFunction& f) { return f.expectation(); }

CorrelationResult r_ell_naive(const Mod1Sequence& seq, int ell, const TestFunction& f,
                              int workers) {
    validate(seq, ell, f, false);
    double t0 = now_ms();
    const std::vector<double>& x = seq.values;
    const long N = seq.N;

    const int chunks = 64;
    std::vector<KahanSum> sums(chunks);
    std::vector<long long> counts(chunks, 0);
    std::vector<double> tails(chunks, 0.0);

    for_chunks(N, workers, chunks, [&](int c, long lo, long hi) {
        FactorEval fe{f, N};
        std::array<long, 6> idx{};
        // depth-first chain over positions 1..ell-1 given the start index
        auto recurse = [&](auto&& self, int pos, double weight, long long int_weight) -> void {
            if (pos == ell) {
                sums[c].add(weight);
                counts[c] += int_weight;
                return;
            }
            for (long j = 0; j < N; ++j) {
                bool used = false;
                for (int t = 0; t < pos; ++t)
                    if (idx[static_cast<size_t>(t)] == j) { used = true; break; }
                if (used) continue;
                double y = x[static_cast<size_t>(idx[static_cast<size_t>(pos - 1)])] -
                           x[static_cast<size_t>(j)];
                long long iw = 0;
                double w = fe.eval(pos - 1, y, &iw);
                if (w == 0.0) continue;
                idx[static_cast<size_t>(pos)] = j;
                self(self, pos + 1, weight * w, int_weight * iw);
            }
        };
        for (long n1 = lo; n1 < hi; ++n1) {
            idx[0] = n1;
            recurse(recurse, 1, 1.0, 1);
        }
        // crude certified tail: per-evaluation tail times evaluation count bound
        if (fe.tail_per_eval > 0.0) {
            double evals = static_cast<double>(hi - lo);
            for (int p = 1; p < ell; ++p) evals *= static_cast<double>(N);
            double factor_cap = 1.0;
            for (const auto& fac : f.factors)
                if (fac.kind == Factor::Kind::Fejer) factor_cap = std::max(factor_cap, fac.width + 1.0);
            tails[c] = fe.tail_per_eval * evals * static_cast<double>(ell - 1) *
                       std::pow(factor_cap, ell - 2);
        }
    });

    CorrelationResult res;
    res.ell = ell;
    res.N = N;
    res.expectation = f.expectation();
    KahanSum total;
    for (int c = 0; c < chunks; ++c) {
        total.merge(sums[c]);
        res.tuple_count += counts[c];
        res.k_tail += tails[c] / static_cast<double>(N);
    }
    res.value = f.all_indicator() ? static_cast<double>(res.tuple_count) / static_cast<double>(N)
                                  : total.sum / static_cast<double>(N);
    res.runtime_ms = now_ms() - t0;
    return res;
}

namespace {

struct SortedPoints {
    std::vector<double> vals;  // ascending
    std::vector<long> idx;     // original index per sorted slot
};

SortedPoints sort_points(const std::vector<double>& x) {
    SortedPoints sp;
    long n = static_cast<long>(x.size());
    sp.idx.resize(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) sp.idx[static_cast<size_t>(i)] = i;
    std::sort(sp.idx.begin(), sp.idx.end(), [&](long a, long b) {
        if (x[static_cast<size_t>(a)] != x[static_cast<size_t>(b)])
            return x[static_cast<size_t>(a)] < x[static_cast<size_t>(b)];
        return a < b;
    });
    sp.vals.reserve(static_cast<size_t>(n));
    for (long i : sp.idx) sp.vals.push_back(x[static_cast<size_t>(i)]);
    return sp;
}

// Collect sorted slots whose value lies in [a, b] on the circle (b - a < 1
// assumed after widening; if the arc covers everything the caller handles it).
template <typename Fn>
void for_arc(const SortedPoints& sp, double a, double b, Fn&& fn) {
    long n = static_cast<long>(sp.vals.size());
    auto emit_range = [&](double lo, double hi) {
        auto first = std::lower_bound(sp.vals.begin(), sp.vals.end(), lo);
        auto last = std::upper_bound(sp.vals.begin(), sp.vals.end(), hi);
        for (auto it = first; it != last; ++it)
            fn(static_cast<long>(it - sp.vals.begin()));
    };
    a -= std::floor(a);
    b -= std::floor(b);
    (void)n;
    if (a <= b) {
        emit_range(a, b);
    } else {
        emit_range(a, 1.0);
        emit_range(0.0, b);
    }
}

}  // namespace

CorrelationResult r_ell_windowed(const Mod1Sequence& seq, int ell, const TestFunction& f,
                                 int workers) {
    validate(seq, ell, f, true);
    double t0 = now_ms();
    const std::vector<double>& x = seq.values;
    const long N = seq.N;
    SortedPoints sp = sort_points(x);

    const double eps = 1e-9;
    const int chunks = 64;
    std::vector<long long> counts(chunks, 0);

    for_chunks(N, workers, chunks, [&](int c, long lo_n, long hi_n) {
        std::array<long, 6> chain_idx{};  // original indices along the chain
        auto extend = [&](auto&& self, int pos, double cur_val, long long weight) -> void {
            if (pos == ell) {
                counts[c] += weight;
                return;
            }
            const Factor& fac = f.factors[static_cast<size_t>(pos - 1)];
            double arc_lo = cur_val - fac.hi / static_cast<double>(N) - eps;
            double arc_hi = cur_val - fac.lo / static_cast<double>(N) + eps;
            auto visit = [&](long slot) {
                long orig = sp.idx[static_cast<size_t>(slot)];
                for (int t = 0; t < pos; ++t)
                    if (chain_idx[static_cast<size_t>(t)] == orig) return;
                double y = cur_val - x[static_cast<size_t>(orig)];
                int mult = indicator_multiplicity(y, fac.lo, fac.hi, N);
                if (mult == 0) return;
                chain_idx[static_cast<size_t>(pos)] = orig;
                self(self, pos + 1, x[static_cast<size_t>(orig)],
                     weight * static_cast<long long>(mult));
            };
            if (arc_hi - arc_lo >= 1.0) {
                for (long slot = 0; slot < N; ++slot) visit(slot);
            } else {
                for_arc(sp, arc_lo, arc_hi, visit);
            }
        };
        for (long n1 = lo_n; n1 < hi_n; ++n1) {
            chain_idx[0] = n1;
            extend(extend, 1, x[static_cast<size_t>(n1)], 1);
        }
    });

    CorrelationResult res;
    res.ell = ell;
    res.N = N;
    res.expectation = f.expectation();
    for (long long c : counts) res.tuple_count += c;
    res.value = static_cast<double>(res.tuple_count) / static_cast<double>(N);
    res.runtime_ms = now_ms() - t0;
    return res;
}

}  // namespace monomod::corr
