#include "monomod/test_function.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace monomod::corr {

Factor Factor::indicator(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("indicator factor: need lo < hi");
    Factor f;
    f.kind = Kind::Indicator;
    f.lo = lo;
    f.hi = hi;
    return f;
}

Factor Factor::fejer(double width) {
    if (!(width > 0)) throw std::invalid_argument("fejer factor: need width > 0");
    Factor f;
    f.kind = Kind::Fejer;
    f.width = width;
    return f;
}

double Factor::integral() const { return kind == Kind::Indicator ? hi - lo : 1.0; }

double TestFunction::expectation() const {
    double e = 1.0;
    for (const auto& f : factors) e *= f.integral();
    return e;
}

bool TestFunction::all_indicator() const {
    for (const auto& f : factors)
        if (f.kind != Factor::Kind::Indicator) return false;
    return true;
}

bool TestFunction::all_fejer() const {
    for (const auto& f : factors)
        if (f.kind != Factor::Kind::Fejer) return false;
    return true;
}

TestFunction TestFunction::indicator_box(const std::vector<std::pair<double, double>>& intervals) {
    TestFunction tf;
    for (auto [lo, hi] : intervals) tf.factors.push_back(Factor::indicator(lo, hi));
    return tf;
}

TestFunction TestFunction::parse_support(const std::string& spec) {
    TestFunction tf;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        if (part.empty()) continue;
        auto comma = part.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("support: expected 'lo,hi' in " + part);
        double lo = std::stod(part.substr(0, comma));
        double hi = std::stod(part.substr(comma + 1));
        tf.factors.push_back(Factor::indicator(lo, hi));
    }
    if (tf.factors.empty()) throw std::invalid_argument("support: no intervals given");
    return tf;
}

TestFunction TestFunction::fejer_box(int arity, double width) {
    TestFunction tf;
    for (int i = 0; i < arity; ++i) tf.factors.push_back(Factor::fejer(width));
    return tf;
}

}  // namespace monomod::corr
