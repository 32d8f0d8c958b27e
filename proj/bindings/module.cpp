#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "monomod/correlation.hpp"
#include "monomod/counting.hpp"
#include "monomod/exponents.hpp"
#include "monomod/fourier.hpp"
#include "monomod/gaps.hpp"
#include "monomod/sequence.hpp"

namespace py = pybind11;
using namespace monomod;

namespace {

seq::Mod1Sequence make_sequence(const std::string& alpha, int d, long N, int workers) {
    return seq::generate(seq::AlphaSpec::parse(alpha), d, N, workers);
}

corr::TestFunction make_function(const std::string& support, double fejer_width, int arity) {
    if (fejer_width > 0) return corr::TestFunction::fejer_box(arity, fejer_width);
    return corr::TestFunction::parse_support(support);
}

}  // namespace

PYBIND11_MODULE(_monomod, mod) {
    mod.doc() = "local statistics of alpha n^d mod 1 and diagonal-form point counts";

    mod.def(
        "sequence",
        [](const std::string& alpha, int d, long N, int workers) {
            return make_sequence(alpha, d, N, workers).values;
        },
        py::arg("alpha"), py::arg("d"), py::arg("N"), py::arg("workers") = 1,
        "values of alpha n^d mod 1 for n = 1..N (nearest doubles)");

    mod.def(
        "correlate",
        [](const std::string& alpha, int d, long N, int ell, const std::string& support,
           double fejer, const std::string& algorithm, int workers) {
            auto s = make_sequence(alpha, d, N, workers);
            auto f = make_function(support, fejer, ell - 1);
            corr::CorrelationResult r;
            if (algorithm == "naive" || (algorithm == "auto" && !f.all_indicator()))
                r = corr::r_ell_naive(s, ell, f, workers);
            else
                r = corr::r_ell_windowed(s, ell, f, workers);
            return py::dict(py::arg("value") = r.value, py::arg("expectation") = r.expectation,
                            py::arg("tuple_count") = r.tuple_count, py::arg("N") = r.N,
                            py::arg("ell") = r.ell);
        },
        py::arg("alpha"), py::arg("d"), py::arg("N"), py::arg("ell"), py::arg("support") = "",
        py::arg("fejer") = 0.0, py::arg("algorithm") = "auto", py::arg("workers") = 1,
        "ell-point correlation R_ell^N for a product test function");

    mod.def(
        "gap_cdf",
        [](const std::string& alpha, int d, long N, double s, int workers) {
            return gaps::gap_cdf(make_sequence(alpha, d, N, workers), s);
        },
        py::arg("alpha"), py::arg("d"), py::arg("N"), py::arg("s"), py::arg("workers") = 1,
        "fraction of circular nearest-neighbor gaps below s/N");

    mod.def("taylor_sandwich", &gaps::taylor_sandwich, py::arg("s"), py::arg("K"),
            "(lower, upper) alternating Taylor bounds around 1 - exp(-s)");

    mod.def(
        "exponents",
        [](const std::string& d, long n, int m) {
            mpz_class dz;
            if (dz.set_str(d, 10) != 0) throw std::invalid_argument("bad integer: " + d);
            auto rep = exponents::report(dz, n, m);
            py::dict out;
            out["L"] = rep.L.get_str();
            out["phi"] = rep.phi.value;
            out["phi_decimal"] = rep.phi.decimal;
            out["argmax_s"] = rep.phi.argmax_s;
            out["d_ell_for_n"] = rep.d_ell_for_n.get_str();
            out["threshold"] =
                rep.threshold_defined ? py::cast(rep.threshold) : py::object(py::none());
            return out;
        },
        py::arg("d"), py::arg("n"), py::arg("m"),
        "L(d,n), phi(m,d,n), d_ell and the Poissonian threshold");

    mod.def(
        "count",
        [](const std::string& coeffs, int d, long B, bool naive, int workers) {
            auto form = counting::DiagonalForm::parse(coeffs, d);
            auto rep = counting::count_report(form, B, {}, workers, naive);
            py::dict out;
            out["B"] = rep.B;
            out["total"] = rep.total;
            out["in_w"] = rep.in_w;
            out["no_vanishing_subsum"] = rep.no_vanishing_subsum;
            out["other_subsum"] = rep.other_subsum;
            out["by_binary_pairs"] =
                std::map<int, long long>(rep.by_binary_pairs.begin(), rep.by_binary_pairs.end());
            out["m"] = rep.m;
            out["log_B"] = rep.log_b;
            return out;
        },
        py::arg("a"), py::arg("d"), py::arg("B"), py::arg("naive") = false, py::arg("workers") = 1,
        "stratified count of rational points on a_0 x_0^d + ... + a_n x_n^d = 0");

    mod.def(
        "enumerate_points",
        [](const std::string& coeffs, int d, long B, int workers) {
            auto pts = counting::enumerate_points(counting::DiagonalForm::parse(coeffs, d), B,
                                                  {}, workers);
            std::vector<std::vector<long long>> out;
            out.reserve(pts.size());
            for (auto& p : pts) out.push_back(p.coords);
            return out;
        },
        py::arg("a"), py::arg("d"), py::arg("B"), py::arg("workers") = 1,
        "primitive sign-canonical solutions with height at most B");

    mod.def(
        "two_var_count",
        [](long long a, long long b, int d, long B) {
            auto r = counting::two_var_count(mpz_class(static_cast<long>(a)),
                                             mpz_class(static_cast<long>(b)), d, B);
            return py::make_tuple(r.count, r.bound_ok);
        },
        py::arg("a"), py::arg("b"), py::arg("d"), py::arg("B"),
        "(count, count <= 8B+1) for a x^d = b y^d with |x|,|y| <= B");

    mod.def(
        "expectation_mc",
        [](int d, int ell, long N, int trials, std::uint64_t seed, int workers) {
            std::vector<std::pair<double, double>> box(static_cast<size_t>(ell - 1),
                                                       {-0.5, 0.5});
            auto st = fourier::expectation_mc(d, ell, corr::TestFunction::indicator_box(box), N,
                                              trials, seed, workers);
            return py::make_tuple(st.mean, st.stderr_);
        },
        py::arg("d"), py::arg("ell"), py::arg("N"), py::arg("trials"), py::arg("seed"),
        py::arg("workers") = 1,
        "(mean, stderr) of R_ell^N over random alpha, box [-1/2,1/2]^(ell-1)");
}
