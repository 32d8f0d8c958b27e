#include "monomod/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "monomod/errors.hpp"
#include "monomod/exponents.hpp"
#include "monomod/parallel.hpp"

namespace monomod::counting {

DiagonalForm::DiagonalForm(std::vector<mpz_class> coeffs, int degree) : a(std::move(coeffs)), d(degree) {
    if (a.size() < 2) throw std::invalid_argument("DiagonalForm: need at least two coefficients");
    if (d < 2) throw std::invalid_argument("DiagonalForm: degree must be >= 2");
    for (const auto& c : a)
        if (c == 0) throw std::invalid_argument("coefficients must be nonzero");
}

DiagonalForm DiagonalForm::parse(const std::string& csv, int degree) {
    std::vector<mpz_class> coeffs;
    std::stringstream ss(csv);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        coeffs.emplace_back(part);
    }
    return DiagonalForm(std::move(coeffs), degree);
}

long long ProjectivePoint::height() const {
    long long h = 0;
    for (long long c : coords) h = std::max(h, std::llabs(c));
    return h;
}

std::optional<mpz_class> exact_root(const mpz_class& z, int d) {
    if (d < 2) throw std::invalid_argument("exact_root: d must be >= 2");
    if (z == 0) return mpz_class(0);
    if (z < 0 && d % 2 == 0) return std::nullopt;
    mpz_class az = abs(z);
    mpz_class r;
    int exact = mpz_root(r.get_mpz_t(), az.get_mpz_t(), static_cast<unsigned long>(d));
    if (!exact) return std::nullopt;
    return z < 0 ? mpz_class(-r) : r;
}

bool is_dth_power(const mpz_class& z, int d) { return exact_root(z, d).has_value(); }

namespace {

// Pair predicate behind m(a) and the W strata: after removing the common
// factor, -a_i a_j must be a d-th power. The reduction makes the predicate
// equivalent to -a_j/a_i being a rational d-th power, which is the condition
// for a rational line x_i/x_j = const on the hypersurface and is invariant
// under scaling the whole coefficient vector.
bool power_pair(const mpz_class& ai, const mpz_class& aj, int d) {
    mpz_class g = gcd(ai, aj);
    mpz_class p = -(ai / g) * (aj / g);
    return is_dth_power(p, d);
}

int max_matching(int nverts, const std::vector<std::pair<int, int>>& edges) {
    int full = 1 << nverts;
    std::vector<signed char> memo(static_cast<size_t>(full), -1);
    auto solve = [&](auto&& self, int mask) -> int {
        if (mask == 0) return 0;
        signed char& m = memo[static_cast<size_t>(mask)];
        if (m >= 0) return m;
        int low = __builtin_ctz(mask);
        int best = self(self, mask & ~(1 << low));
        for (auto [u, v] : edges) {
            int bits = (1 << u) | (1 << v);
            if ((u == low || v == low) && (mask & bits) == bits)
                best = std::max(best, 1 + self(self, mask & ~bits));
        }
        m = static_cast<signed char>(best);
        return best;
    };
    return solve(solve, full - 1);
}

}  // namespace

int m_of_vector(const std::vector<mpz_class>& coeffs, int d) {
    int nv = static_cast<int>(coeffs.size());
    if (nv > 14) throw ResourceError("m_of: exhaustive matching limited to 14 coefficients");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j)
            if (power_pair(coeffs[static_cast<size_t>(i)], coeffs[static_cast<size_t>(j)], d))
                edges.emplace_back(i, j);
    return max_matching(nv, edges);
}

int m_of(const DiagonalForm& form) { return m_of_vector(form.a, form.d); }

// ---------------------------------------------------------------------------
// enumeration

namespace {

using i128 = __int128;

struct I128Hash {
    size_t operator()(i128 v) const {
        auto u = static_cast<unsigned __int128>(v);
        return static_cast<size_t>(splitmix64(static_cast<std::uint64_t>(u) ^
                                              splitmix64(static_cast<std::uint64_t>(u >> 64))));
    }
};

bool fits_i128(const DiagonalForm& form, long B) {
    mpz_class bd;
    mpz_ui_pow_ui(bd.get_mpz_t(), static_cast<unsigned long>(B), static_cast<unsigned long>(form.d));
    mpz_class worst = 0;
    for (const auto& c : form.a) {
        if (mpz_sizeinbase(c.get_mpz_t(), 2) > 62) return false;
        worst += abs(c) * bd;
    }
    mpz_class limit = mpz_class(1) << 120;
    return worst < limit;
}

// a_i * x^d for x = -B..B, one row per coordinate
std::vector<std::vector<i128>> power_tables(const DiagonalForm& form, long B) {
    size_t width = static_cast<size_t>(2 * B + 1);
    std::vector<std::vector<i128>> t(form.a.size(), std::vector<i128>(width));
    for (size_t i = 0; i < form.a.size(); ++i) {
        i128 ai = static_cast<i128>(form.a[i].get_si());
        for (long ax = 0; ax <= B; ++ax) {
            i128 p = 1;
            for (int k = 0; k < form.d; ++k) p *= static_cast<i128>(ax);
            i128 val = ai * p;
            t[i][static_cast<size_t>(ax + B)] = val;
            i128 neg = (form.d % 2 == 0) ? val : -val;
            t[i][static_cast<size_t>(-ax + B)] = neg;
        }
    }
    return t;
}

bool canonical_primitive(const std::vector<long long>& coords) {
    long long g = 0;
    long long first_nonzero = 0;
    for (long long c : coords) {
        if (c != 0 && first_nonzero == 0) first_nonzero = c;
        g = std::gcd(g, std::llabs(c));
    }
    return first_nonzero > 0 && g == 1;
}

void mpz_fallback_guard(const DiagonalForm& form, long B) {
    if (!fits_i128(form, B))
        throw ResourceError("enumerate_points: coefficient/height range exceeds the 128-bit "
                            "fast path; reduce |a_i| or B");
}

}  // namespace

std::vector<ProjectivePoint> enumerate_points_naive(const DiagonalForm& form, long B) {
    if (B < 1) throw std::invalid_argument("enumerate_points: B must be >= 1");
    mpz_fallback_guard(form, B);
    auto tables = power_tables(form, B);
    int nv = form.n() + 1;
    std::vector<ProjectivePoint> out;
    std::vector<long long> coords(static_cast<size_t>(nv), 0);
    auto recurse = [&](auto&& self, int i, i128 sum) -> void {
        if (i == nv) {
            if (sum != 0) return;
            if (!canonical_primitive(coords)) return;
            out.push_back(ProjectivePoint{coords});
            return;
        }
        for (long x = -B; x <= B; ++x) {
            coords[static_cast<size_t>(i)] = x;
            self(self, i + 1, sum + tables[static_cast<size_t>(i)][static_cast<size_t>(x + B)]);
        }
    };
    recurse(recurse, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ProjectivePoint> enumerate_points(const DiagonalForm& form, long B,
                                              const EnumerationBudget& budget, int workers) {
    if (B < 1) throw std::invalid_argument("enumerate_points: B must be >= 1");
    mpz_fallback_guard(form, B);
    int nv = form.n() + 1;
    int h1 = (nv + 1) / 2;  // first-half size (the larger half)
    int h2 = nv - h1;
    long width = 2 * B + 1;
    double half_cells = std::pow(static_cast<double>(width), h1);
    if (half_cells > static_cast<double>(budget.max_half_cells))
        throw ResourceError("enumerate_points: (2B+1)^ceil((n+1)/2) = " +
                            std::to_string(half_cells) + " exceeds the work budget of " +
                            std::to_string(budget.max_half_cells));

    auto tables = power_tables(form, B);

    // join map over the second half: partial sum -> encoded assignments
    long long n2 = 1;
    for (int i = 0; i < h2; ++i) n2 *= width;
    std::unordered_map<i128, std::vector<long long>, I128Hash> join;
    join.reserve(static_cast<size_t>(n2));
    for (long long e = 0; e < n2; ++e) {
        long long rem = e;
        i128 sum = 0;
        for (int i = 0; i < h2; ++i) {
            long digit = static_cast<long>(rem % width);
            rem /= width;
            sum += tables[static_cast<size_t>(h1 + i)][static_cast<size_t>(digit)];
        }
        join[sum].push_back(e);
    }

    long long n1 = 1;
    for (int i = 0; i < h1; ++i) n1 *= width;
    const int chunks = 64;
    std::vector<std::vector<ProjectivePoint>> found(chunks);
    for_chunks(n1, workers, chunks, [&](int c, long lo, long hi) {
        std::vector<long long> coords(static_cast<size_t>(nv));
        for (long long e = lo; e < hi; ++e) {
            long long rem = e;
            i128 sum = 0;
            for (int i = 0; i < h1; ++i) {
                long digit = static_cast<long>(rem % width);
                rem /= width;
                coords[static_cast<size_t>(i)] = digit - B;
                sum += tables[static_cast<size_t>(i)][static_cast<size_t>(digit)];
            }
            auto it = join.find(-sum);
            if (it == join.end()) continue;
            for (long long e2 : it->second) {
                long long rem2 = e2;
                for (int i = 0; i < h2; ++i) {
                    long digit = static_cast<long>(rem2 % width);
                    rem2 /= width;
                    coords[static_cast<size_t>(h1 + i)] = digit - B;
                }
                bool zero = true;
                for (long long v : coords)
                    if (v != 0) { zero = false; break; }
                if (zero) continue;
                if (!canonical_primitive(coords)) continue;
                found[c].push_back(ProjectivePoint{coords});
            }
        }
    });

    std::vector<ProjectivePoint> out;
    for (auto& chunk : found)
        out.insert(out.end(), chunk.begin(), chunk.end());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// classification

StratumDescriptor classify_point(const DiagonalForm& form, const ProjectivePoint& p) {
    int nv = form.n() + 1;
    if (static_cast<int>(p.coords.size()) != nv)
        throw std::invalid_argument("classify_point: coordinate count mismatch");
    std::vector<mpz_class> terms(static_cast<size_t>(nv));
    mpz_class total = 0;
    for (int i = 0; i < nv; ++i) {
        mpz_class xp;
        mpz_class x(static_cast<long>(p.coords[static_cast<size_t>(i)]));
        mpz_pow_ui(xp.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(form.d));
        terms[static_cast<size_t>(i)] = form.a[static_cast<size_t>(i)] * xp;
        total += terms[static_cast<size_t>(i)];
    }
    if (total != 0) throw std::invalid_argument("classify_point: point is not on the hypersurface");

    StratumDescriptor desc;
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j)
            if (terms[static_cast<size_t>(i)] + terms[static_cast<size_t>(j)] == 0)
                desc.in_w = true;

    // Greedy minimal partition: repeatedly remove the first vanishing subset
    // in (size, lex) order. The full remainder always vanishes, so this
    // terminates with every part summing to zero.
    std::vector<int> remaining(static_cast<size_t>(nv));
    std::iota(remaining.begin(), remaining.end(), 0);
    while (!remaining.empty()) {
        int r = static_cast<int>(remaining.size());
        std::vector<int> part;
        for (int size = 1; size <= r && part.empty(); ++size) {
            // combinations of `remaining` of the given size, lexicographic
            std::vector<int> pick(static_cast<size_t>(size));
            std::iota(pick.begin(), pick.end(), 0);
            for (;;) {
                mpz_class sum = 0;
                for (int t : pick) sum += terms[static_cast<size_t>(remaining[static_cast<size_t>(t)])];
                if (sum == 0) {
                    for (int t : pick) part.push_back(remaining[static_cast<size_t>(t)]);
                    break;
                }
                int i = size - 1;
                while (i >= 0 && pick[static_cast<size_t>(i)] == r - size + i) --i;
                if (i < 0) break;
                ++pick[static_cast<size_t>(i)];
                for (int j = i + 1; j < size; ++j)
                    pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
            }
        }
        for (int idx : part)
            remaining.erase(std::find(remaining.begin(), remaining.end(), idx));
        if (static_cast<int>(part.size()) == 1) ++desc.forced_zeros;
        if (static_cast<int>(part.size()) == 2) ++desc.binary_pairs;
        desc.partition.push_back(std::move(part));
    }
    return desc;
}

TwoVarCount two_var_count(const mpz_class& a, const mpz_class& b, int d, long B) {
    if (a == 0 || b == 0) throw std::invalid_argument("two_var_count: a, b must be nonzero");
    if (d < 2 || B < 1) throw std::invalid_argument("two_var_count: need d >= 2, B >= 1");
    mpz_class g = gcd(a, b);
    mpz_class ar = a / g, br = b / g;
    // even d: a common sign unit is invisible to the equation
    if (d % 2 == 0 && ar < 0 && br < 0) {
        ar = -ar;
        br = -br;
    }

    TwoVarCount res;
    res.count = 1;  // (0,0)
    // Nonzero solutions split as x = x1 x2, y = y1 y2 with x2^d = y2^d forced;
    // they exist iff x1^d = b and y1^d = a are solvable after the reduction.
    auto x1 = exact_root(br, d);
    auto y1 = exact_root(ar, d);
    if (x1 && y1) {
        mpz_class step = std::max(abs(*x1), abs(*y1));
        long long t_max = mpz_class(B / step).get_si();
        // d odd: (x1 t, y1 t); d even: independent signs double the family.
        res.count += (d % 2 == 1 ? 2 : 4) * t_max;
    }
    res.bound_ok = res.count <= 8 * static_cast<long long>(B) + 1;
    return res;
}

StratifiedCount count_report(const DiagonalForm& form, long B, const EnumerationBudget& budget,
                             int workers, bool naive) {
    auto points = naive ? enumerate_points_naive(form, B)
                        : enumerate_points(form, B, budget, workers);
    StratifiedCount sc;
    sc.B = B;
    sc.total = static_cast<long long>(points.size());
    sc.m = m_of(form);
    for (const auto& p : points) {
        auto desc = classify_point(form, p);
        if (desc.in_w) ++sc.in_w;
        if (desc.partition.size() == 1) {
            ++sc.no_vanishing_subsum;
        } else if (desc.binary_pairs > 0) {
            ++sc.by_binary_pairs[desc.binary_pairs];
        } else {
            ++sc.other_subsum;
        }
    }
    int n = form.n();
    if (form.d > n && n >= 2) {
        sc.phi = exponents::phi_of(sc.m, mpz_class(form.d), n).value;
        sc.subsum_free_exponent = exponents::phi_of(0, mpz_class(form.d), n).value;
    }
    if (B >= 2) {
        double lb = std::log(static_cast<double>(B));
        auto slot = [&](const std::string& name, long long count) {
            if (count > 0) sc.log_b[name] = std::log(static_cast<double>(count)) / lb;
        };
        slot("total", sc.total);
        slot("no_vanishing_subsum", sc.no_vanishing_subsum);
        slot("other_subsum", sc.other_subsum);
        for (const auto& [s, count] : sc.by_binary_pairs)
            slot("binary_pairs_" + std::to_string(s), count);
    }
    return sc;
}

}  // namespace monomod::counting
