#include <doctest.h>

#include <cmath>
#include <random>

#include "monomod/gaps.hpp"

using namespace monomod;
using namespace monomod::gaps;
using monomod::seq::Mod1Sequence;

namespace {

Mod1Sequence lattice(long N) {
    // exact rationals n/N; double division would break the tie at s = 1
    Mod1Sequence s;
    s.N = N;
    for (long n = 0; n < N; ++n) {
        s.exact.emplace_back(n, N);
        s.exact.back().canonicalize();
        s.values.push_back(static_cast<double>(n) / static_cast<double>(N));
    }
    return s;
}

}  // namespace

TEST_CASE("lattice gaps are all exactly 1/N") {
    auto s = lattice(50);
    CHECK(gap_cdf(s, 0.9) == 0.0);
    CHECK(gap_cdf(s, 1.0) == 0.0);  // strict inequality excludes the tie
    CHECK(gap_cdf(s, 1.1) == 1.0);
}

TEST_CASE("two points close the circle") {
    auto s = Mod1Sequence::from_values({0.1, 0.6});
    CHECK(gap_cdf(s, 0.9) == 0.0);
    CHECK(gap_cdf(s, 1.1) == 1.0);
}

TEST_CASE("taylor sandwich basic values") {
    auto [lo1, up1] = taylor_sandwich(1.0, 1);
    CHECK(lo1 == 0.5);
    CHECK(up1 == 1.0);

    auto [lo3, up3] = taylor_sandwich(1.0, 3);
    double ref = 1.0 - std::exp(-1.0);
    CHECK(lo3 <= ref);
    CHECK(ref <= up3);
    CHECK(up3 - lo3 < 0.0014);  // 1/6!
}

TEST_CASE("sandwich width is the trailing term") {
    for (double s : {0.1, 0.5, 0.9, 1.0}) {
        for (int K : {1, 2, 4}) {
            auto [lo, up] = taylor_sandwich(s, K);
            double term = std::pow(s, 2 * K) / std::tgamma(2 * K + 1);
            CHECK(up - lo == doctest::Approx(term).epsilon(1e-12));
            CHECK(up > lo);
        }
    }
}

TEST_CASE("sandwich brackets 1 - exp(-s) on a grid") {
    for (int i = 1; i <= 20; ++i) {
        double s = 0.1 * i;
        for (int K = 1; K <= 6; ++K) {
            auto [lo, up] = taylor_sandwich(s, K);
            // slack: for large K the true margin s^{2K}/(2K)! sits below one ulp
            CHECK(lo <= 1.0 - std::exp(-s) + 1e-14);
            CHECK(1.0 - std::exp(-s) <= up + 1e-14);
        }
    }
}

TEST_CASE("gap_cdf is monotone in s and rotation invariant") {
    std::mt19937_64 rng(4);
    std::vector<double> v;
    for (int i = 0; i < 300; ++i) v.push_back(static_cast<double>(rng() >> 11) * 0x1p-53);
    auto s = Mod1Sequence::from_values(v);

    double prev = 0.0;
    for (double x = 0.2; x <= 4.0; x += 0.2) {
        double p = gap_cdf(s, x);
        CHECK(p >= prev);
        CHECK(p <= 1.0);
        prev = p;
    }

    std::vector<double> rotated;
    for (double x : v) {
        double y = x + 0.37;
        rotated.push_back(y >= 1.0 ? y - 1.0 : y);
    }
    auto t = Mod1Sequence::from_values(rotated);
    for (double x : {0.5, 1.0, 2.0})
        CHECK(gap_cdf(s, x) == gap_cdf(t, x));
}

TEST_CASE("report is consistent with the pieces") {
    auto s = lattice(20);
    auto rep = gap_report(s, {0.5, 1.5}, 2);
    CHECK(rep.p_values[0] == 0.0);
    CHECK(rep.p_values[1] == 1.0);
    CHECK(rep.exp_ref[0] == doctest::Approx(1.0 - std::exp(-0.5)));
    CHECK(rep.lower[0] <= rep.exp_ref[0]);
    CHECK(rep.exp_ref[0] <= rep.upper[0]);
}

TEST_CASE("grid parsing") {
    auto g = parse_grid("0.1:0.5:0.1");
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(0.1));
    CHECK(g.back() == doctest::Approx(0.5));
    CHECK_THROWS(parse_grid("1:2"));
    CHECK_THROWS(parse_grid("2:1:0.5"));
    CHECK_THROWS(parse_grid("1:2:0"));
}
