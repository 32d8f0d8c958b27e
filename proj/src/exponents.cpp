#include "monomod/exponents.hpp"

#include <mpfr.h>

#include <stdexcept>
#include <vector>

#include "monomod/errors.hpp"

namespace monomod::exponents {

mpq_class l_of(const mpz_class& d, long n) {
    if (d < 2) throw std::domain_error("l_of: d must be >= 2");
    if (n < 2) throw std::domain_error("l_of: n must be >= 2 (n^2-n vanishes)");
    mpq_class num(2 * (d - n + 1));
    mpq_class den(mpz_class(n) * n - n);
    mpq_class l = 1 + num / den;
    l.canonicalize();
    return l;
}

namespace {

// One phi candidate s + sum_{r=1}^{rmax} (r+1) L^{-1/r}, rounded in direction
// `up`. L^{-1/r} is decreasing in L, so the root uses L rounded the other way.
void phi_candidate(mpfr_t out, int s, int rmax, const mpq_class& L, bool up) {
    mpfr_rnd_t dir = up ? MPFR_RNDU : MPFR_RNDD;
    mpfr_rnd_t anti = up ? MPFR_RNDD : MPFR_RNDU;
    mpfr_prec_t prec = mpfr_get_prec(out);
    mpfr_t l, root, term;
    mpfr_inits2(prec, l, root, term, nullptr);
    mpfr_set_q(l, L.get_mpq_t(), anti);
    mpfr_set_si(out, s, MPFR_RNDN);
    for (int r = 1; r <= rmax; ++r) {
        mpfr_rootn_ui(root, l, static_cast<unsigned long>(r), anti);
        mpfr_ui_div(term, static_cast<unsigned long>(r + 1), root, dir);
        mpfr_add(out, out, term, dir);
    }
    mpfr_clears(l, root, term, nullptr);
}

struct PhiInterval {
    mpfr_t lo, up;
    int argmax;
    explicit PhiInterval(mpfr_prec_t prec) {
        mpfr_inits2(prec, lo, up, nullptr);
        argmax = 0;
    }
    ~PhiInterval() { mpfr_clears(lo, up, nullptr); }
    PhiInterval(const PhiInterval&) = delete;
};

void phi_interval(PhiInterval& out, int m, const mpz_class& d, int n, mpfr_prec_t prec) {
    if (n < 2 || d <= n) throw std::domain_error("phi_of: requires d > n >= 2");
    if (m < 0 || 2 * m > n + 1) throw std::domain_error("phi_of: requires 0 <= m <= (n+1)/2");
    mpq_class L = l_of(d, n);
    mpfr_t clo, cup;
    mpfr_inits2(prec, clo, cup, nullptr);
    bool first = true;
    for (int s = 0; s <= m; ++s) {
        int rmax = n - 2 * s - 1;
        if (rmax < 0) rmax = 0;
        phi_candidate(cup, s, rmax, L, true);
        phi_candidate(clo, s, rmax, L, false);
        // Max over s; ties (by the comparable upper bound) break toward small s.
        if (first || mpfr_cmp(cup, out.up) > 0) {
            mpfr_set(out.up, cup, MPFR_RNDU);
            out.argmax = s;
        }
        // Lower bound for the max is the max of the candidate lower bounds.
        if (first || mpfr_cmp(clo, out.lo) > 0) {
            mpfr_set(out.lo, clo, MPFR_RNDD);
        }
        first = false;
    }
    mpfr_clears(clo, cup, nullptr);
}

}  // namespace

PhiResult phi_of(int m, const mpz_class& d, int n, long precision) {
    if (precision < 16) precision = 16;
    // Extra guard bits so the reported interval width stays below 2^(-precision/2).
    mpfr_prec_t work = static_cast<mpfr_prec_t>(precision + 64);
    for (int attempt = 0; attempt < 6; ++attempt, work *= 2) {
        PhiInterval iv(work);
        phi_interval(iv, m, d, n, work);
        mpfr_t width, target;
        mpfr_inits2(work, width, target, nullptr);
        mpfr_sub(width, iv.up, iv.lo, MPFR_RNDU);
        mpfr_set_ui_2exp(target, 1, -(precision / 2), MPFR_RNDN);
        bool ok = mpfr_cmp(width, target) <= 0;
        mpfr_clears(width, target, nullptr);
        if (!ok) continue;
        PhiResult res;
        res.value = mpfr_get_d(iv.up, MPFR_RNDU);
        res.lower = mpfr_get_d(iv.lo, MPFR_RNDD);
        res.argmax_s = iv.argmax;
        char* str = nullptr;
        mpfr_asprintf(&str, "%.*Rg", static_cast<int>(precision * 0.3010) + 1, iv.up);
        res.decimal = str;
        mpfr_free_str(str);
        return res;
    }
    throw PrecisionError("phi_of: interval failed to narrow");
}

mpz_class d_ell(int ell) {
    if (ell < 2) throw std::domain_error("d_ell: ell must be >= 2");
    mpz_class base = 2 * mpz_class(ell);
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(4 * ell));
    return out;
}

bool poissonian_threshold(const mpz_class& d, int ell) {
    if (ell < 2 || d <= ell) throw std::domain_error("poissonian_threshold: requires d > ell >= 2");
    for (mpfr_prec_t prec = 128; prec <= 8192; prec *= 2) {
        PhiInterval iv(prec);
        phi_interval(iv, 0, d, ell, prec);
        if (mpfr_cmp_ui(iv.up, 1) < 0) return true;
        if (mpfr_cmp_ui(iv.lo, 1) >= 0) return false;
    }
    throw IndeterminateError("poissonian_threshold: phi(0,d,ell) vs 1 undecided at max precision");
}

ExponentReport report(const mpz_class& d, long n, int m, long precision) {
    ExponentReport rep;
    rep.d = d;
    rep.n = n;
    rep.m = m;
    rep.L = l_of(d, n);
    rep.phi = phi_of(m, d, static_cast<int>(n), precision);
    rep.d_ell_for_n = d_ell(static_cast<int>(n));
    if (d > n) {
        rep.threshold = poissonian_threshold(d, static_cast<int>(n));
        rep.threshold_defined = true;
    }
    return rep;
}

}  // namespace monomod::exponents
