#pragma once

#include <string>
#include <utility>
#include <vector>

namespace monomod::corr {

// One 1-D factor of a product test function: either the indicator of
// [lo, hi], or the Fejer bump of width A defined through its transform
// fhat(t) = max(0, 1 - |t|/A), i.e. f(x) = A * (sin(pi A x)/(pi A x))^2.
struct Factor {
    enum class Kind { Indicator, Fejer };
    Kind kind = Kind::Indicator;
    double lo = 0.0, hi = 0.0;  // Indicator
    double width = 0.0;         // Fejer: A > 0

    static Factor indicator(double lo, double hi);
    static Factor fejer(double width);

    double integral() const;  // hi-lo or 1 (fhat(0))
};

struct TestFunction {
    std::vector<Factor> factors;  // arity = ell - 1

    int arity() const { return static_cast<int>(factors.size()); }
    double expectation() const;  // product of factor integrals
    bool all_indicator() const;
    bool all_fejer() const;

    // "a1,b1;a2,b2;..." -> indicator box
    static TestFunction indicator_box(const std::vector<std::pair<double, double>>& intervals);
    static TestFunction parse_support(const std::string& spec);
    static TestFunction fejer_box(int arity, double width);
};

}  // namespace monomod::corr
