#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace monomod::counting {

// Diagonal form a_0 x_0^d + ... + a_n x_n^d with all a_i nonzero.
struct DiagonalForm {
    std::vector<mpz_class> a;
    int d = 0;

    DiagonalForm() = default;
    DiagonalForm(std::vector<mpz_class> coeffs, int degree);
    int n() const { return static_cast<int>(a.size()) - 1; }

    static DiagonalForm parse(const std::string& csv, int degree);
};

// Primitive sign-canonical representative of a projective rational point.
struct ProjectivePoint {
    std::vector<long long> coords;
    long long height() const;
    bool operator==(const ProjectivePoint&) const = default;
    bool operator<(const ProjectivePoint& o) const { return coords < o.coords; }
};

// True iff z = t^d for some integer t (negative z only for odd d).
bool is_dth_power(const mpz_class& z, int d);

// Exact d-th root if z is a d-th power.
std::optional<mpz_class> exact_root(const mpz_class& z, int d);

// Largest number of disjoint index pairs (i,j) with -a_i a_j a d-th power;
// exhaustive matching, n+1 <= 14 enforced.
int m_of(const DiagonalForm& form);
int m_of_vector(const std::vector<mpz_class>& coeffs, int d);

struct EnumerationBudget {
    long long max_half_cells = 5'000'000;  // meet-in-the-middle half-space size
};

// All primitive sign-canonical x in [-B,B]^{n+1} \ {0} with Q_a(x) = 0, each
// exactly once, in ascending lexicographic order. Meet-in-the-middle join on
// exact partial sums.
std::vector<ProjectivePoint> enumerate_points(const DiagonalForm& form, long B,
                                              const EnumerationBudget& budget = {},
                                              int workers = 1);

// Full (2B+1)^(n+1) sweep; reference route for enumerate_points.
std::vector<ProjectivePoint> enumerate_points_naive(const DiagonalForm& form, long B);

struct StratumDescriptor {
    bool in_w = false;                        // some pair with vanishing binary subsum
    std::vector<std::vector<int>> partition;  // minimal vanishing partition, greedy order
    int binary_pairs = 0;                     // number of size-2 parts
    int forced_zeros = 0;                     // number of size-1 parts (zero coordinates)
};

StratumDescriptor classify_point(const DiagonalForm& form, const ProjectivePoint& p);

struct TwoVarCount {
    long long count = 0;
    bool bound_ok = false;  // count <= 8B+1
};

// Exact #{|x|,|y| <= B : a x^d = b y^d} by the coprime-factorization route.
TwoVarCount two_var_count(const mpz_class& a, const mpz_class& b, int d, long B);

struct StratifiedCount {
    long B = 0;
    long long total = 0;
    long long in_w = 0;
    long long no_vanishing_subsum = 0;
    long long other_subsum = 0;
    std::map<int, long long> by_binary_pairs;
    int m = 0;
    // exponents from the degree calculus (defined when d > n >= 2)
    std::optional<double> phi;
    std::optional<double> subsum_free_exponent;
    std::map<std::string, double> log_b;  // log_B(count) per nonzero stratum
};

StratifiedCount count_report(const DiagonalForm& form, long B,
                             const EnumerationBudget& budget = {}, int workers = 1,
                             bool naive = false);

}  // namespace monomod::counting
