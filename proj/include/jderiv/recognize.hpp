#ifndef JDERIV_RECOGNIZE_HPP
#define JDERIV_RECOGNIZE_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "jderiv/complex.hpp"
#include "jderiv/errors.hpp"
#include "jderiv/lll.hpp"

namespace jderiv
{

/// Produces the value being recognized at a requested accuracy (bits).
using ValueSource = std::function<HPComplex(int prec_bits)>;

/// Integer polynomial, constant term first.
using IntPoly = std::vector<mpz_class>;

inline std::string poly_to_string(const IntPoly &p)
{
    std::string s;
    for (std::size_t k = p.size(); k-- > 0;) {
        const mpz_class &c = p[k];
        if (c == 0) {
            continue;
        }
        mpz_class mag = abs(c);
        std::string term = (k == 0 || mag != 1) ? mag.get_str() : "";
        if (k >= 1) {
            term += (term.empty() ? "" : "*") + std::string("X") + (k > 1 ? "^" + std::to_string(k) : "");
        }
        s += s.empty() ? (c < 0 ? "-" : "") + term : (c < 0 ? " - " : " + ") + term;
    }
    return s.empty() ? "0" : s;
}

namespace detail
{

/// |p(z)| / sum |a_k| |z|^k
inline double relative_poly_residual_log2(const IntPoly &p, const HPComplex &z)
{
    const mpfr_prec_t wp = z.work_prec();
    HPComplex acc{Real(wp), Real(wp), z.prec_bits};
    Real scale(wp);
    const Real az = abs(z);
    for (std::size_t k = p.size(); k-- > 0;) {
        acc *= z;
        acc.re += Real(p[k], wp);
        scale = scale * az + abs(Real(p[k], wp));
    }
    if (acc.is_zero()) {
        return -INFINITY;
    }
    if (scale.is_zero()) {
        return 0.0;
    }
    return abs(acc).log2_abs() - scale.log2_abs();
}

inline IntPoly normalize_poly(IntPoly p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
    mpz_class g = 0;
    for (const auto &c : p) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    if (g == 0) {
        return p;
    }
    if (p.back() < 0) {
        g = -g;
    }
    for (auto &c : p) {
        c /= g;
    }
    return p;
}

} // namespace detail

/// Outcome of one fixed-degree lattice search.
struct DegreeSearch {
    int degree = 0;
    bool found = false;
    IntPoly candidate;
    /// log2 relative residual of the shortest vector's polynomial at z.
    double residual_log2 = 0;
    /// log2(min Gram-Schmidt norm / norm bound of any relation of height <= H).
    /// Positive means the box provably holds no exact relation.
    double margin_log2 = 0;
};

struct RecognitionResult {
    bool found = false;
    IntPoly poly;
    int prec_bits = 0;
    int max_deg = 0;
    mpz_class height_bound;
    double residual_log2 = 0;
    double verify_residual_log2 = 0;
    int verify_prec_bits = 0;
    std::vector<DegreeSearch> searches;

    /// key=value lines; the search box is always included.
    std::string serialize() const
    {
        std::ostringstream os;
        os << "found=" << (found ? "true" : "false") << "\n";
        os << "prec_bits=" << prec_bits << "\n";
        os << "max_deg=" << max_deg << "\n";
        os << "height_bound=" << height_bound.get_str() << "\n";
        if (found) {
            os << "poly=" << poly_to_string(poly) << "\n";
            os << "degree=" << poly.size() - 1 << "\n";
            os << "residual_log2=" << std::fixed;
            os.precision(2);
            os << residual_log2 << "\n";
            os << "verify_prec_bits=" << verify_prec_bits << "\n";
            os << "verify_residual_log2=" << verify_residual_log2 << "\n";
        }
        os.unsetf(std::ios::floatfield);
        for (const DegreeSearch &s : searches) {
            std::ostringstream line;
            line << std::fixed;
            line.precision(2);
            line << "search.deg" << s.degree << "=" << (s.found ? "relation" : "none") << " margin_log2=" << s.margin_log2
                 << " residual_log2=" << s.residual_log2;
            os << line.str() << "\n";
        }
        return os.str();
    }
};

/// Floor used by minimal_polynomial: prec >= 32 * max_deg.
inline void check_recognition_prec(int max_deg, int prec_bits)
{
    if (max_deg < 1) {
        throw DomainError("minimal_polynomial: max_deg must be >= 1");
    }
    if (prec_bits < 32 * max_deg) {
        throw PrecisionError("minimal_polynomial: prec " + std::to_string(prec_bits) + " below floor 32*max_deg = " +
                             std::to_string(32 * max_deg));
    }
}

/// Lattice search for an integer relation among 1, z, ..., z^d.
inline DegreeSearch search_degree(const HPComplex &z, int d, const mpz_class &height_bound, int prec_bits)
{
    const mpfr_prec_t wp = z.work_prec();
    PrecisionScope scope(wp);
    const double lz = std::max(0.0, abs(z).log2_abs());
    const long scale_bits = prec_bits - 16 - static_cast<long>(std::ceil(d * lz));
    DegreeSearch out;
    out.degree = d;
    if (scale_bits < 16) {
        out.margin_log2 = -INFINITY;
        out.residual_log2 = 0;
        return out;
    }
    const Real scale = Real::pow2(scale_bits, wp);
    IntMatrix basis(static_cast<std::size_t>(d + 1), std::vector<mpz_class>(static_cast<std::size_t>(d + 3)));
    HPComplex zk = HPComplex::from_long(1, wp);
    for (int k = 0; k <= d; ++k) {
        auto &row = basis[static_cast<std::size_t>(k)];
        row[static_cast<std::size_t>(k)] = 1;
        row[static_cast<std::size_t>(d + 1)] = (zk.re * scale).round_to_mpz();
        row[static_cast<std::size_t>(d + 2)] = (zk.im * scale).round_to_mpz();
        zk *= z;
    }
    LLLResult red = lll_reduce(std::move(basis));
    const auto &v = red.basis.front();
    IntPoly cand(v.begin(), v.begin() + d + 1);
    cand = detail::normalize_poly(cand);

    // Any exact relation of height <= H gives a lattice vector of norm at most
    // H sqrt(d+1) in the identity block plus rounding noise ((d+1)/2 per column).
    Real hb(height_bound, 64);
    Real bound = hb * Real(std::sqrt((d + 1) * (1.0 + (d + 1) / 2.0)), 64);
    Real min_gs = red.gs_norm_sq.front();
    for (const Real &g : red.gs_norm_sq) {
        min_gs = g < min_gs ? g : min_gs;
    }
    out.margin_log2 = 0.5 * min_gs.log2_abs() - bound.log2_abs();

    if (cand.size() != static_cast<std::size_t>(d + 1)) {
        out.residual_log2 = 0;
        return out;
    }
    out.candidate = cand;
    out.residual_log2 = detail::relative_poly_residual_log2(cand, z);
    bool small = true;
    for (const auto &c : cand) {
        small = small && abs(c) <= height_bound;
    }
    out.found = small && out.residual_log2 < -prec_bits / 4.0;
    return out;
}

/// Minimal polynomial of a value given by a source that can be re-evaluated at higher precision.
/**
 * Degrees are searched upward so the first accepted relation is irreducible. An accepted
 * relation is re-verified on a fresh value at 1.5x precision.
 */
inline RecognitionResult minimal_polynomial(const ValueSource &source, int max_deg, const mpz_class &height_bound,
                                            int prec_bits)
{
    check_recognition_prec(max_deg, prec_bits);
    RecognitionResult out;
    out.prec_bits = prec_bits;
    out.max_deg = max_deg;
    out.height_bound = height_bound;
    const HPComplex z = source(prec_bits);
    for (int d = 1; d <= max_deg; ++d) {
        DegreeSearch s = search_degree(z, d, height_bound, prec_bits);
        out.searches.push_back(s);
        if (!s.found) {
            continue;
        }
        const int vp = prec_bits + prec_bits / 2;
        const HPComplex zv = source(vp);
        double vr = detail::relative_poly_residual_log2(s.candidate, zv);
        if (vr < -vp / 4.0) {
            out.found = true;
            out.poly = s.candidate;
            out.residual_log2 = s.residual_log2;
            out.verify_prec_bits = vp;
            out.verify_residual_log2 = vr;
            return out;
        }
        out.searches.back().found = false;
    }
    return out;
}

/// Fixed-value variant: re-verification reuses the same value (no higher precision available).
inline RecognitionResult minimal_polynomial(const HPComplex &z, int max_deg, const mpz_class &height_bound,
                                            int prec_bits)
{
    const int tag = std::min(prec_bits, z.prec_bits);
    RecognitionResult r = minimal_polynomial([&](int) { return z; }, max_deg, height_bound, tag);
    return r;
}

/// Runs the full search and reports it. Never claims transcendence.
inline RecognitionResult transcendence_evidence(const ValueSource &source, int max_deg, const mpz_class &height_bound,
                                                int prec_bits)
{
    return minimal_polynomial(source, max_deg, height_bound, prec_bits);
}

struct RationalResult {
    bool found = false;
    mpq_class value;
    /// log2 |x - p/q| / max(1, |x|) of the accepted convergent (or the last one tried).
    double residual_log2 = 0;
};

/// Continued-fraction recognition of x as p/q with q <= max_den (default 2^(prec/4)).
inline RationalResult rational_reconstruct(const Real &x, int prec_bits, std::optional<mpz_class> max_den = {})
{
    const mpfr_prec_t wp = x.prec();
    mpz_class den_bound;
    if (max_den) {
        den_bound = *max_den;
    } else {
        mpz_ui_pow_ui(den_bound.get_mpz_t(), 2, static_cast<unsigned long>(std::max(1, prec_bits / 4)));
    }
    const Real tol = Real::pow2(-(3L * prec_bits) / 4, wp) * max(abs(x), Real(1L, wp));
    RationalResult out;
    // Convergents h_k / k_k.
    mpz_class h_prev = 1, h = 0, k_prev = 0, k = 1;
    Real rem = x;
    for (int iter = 0; iter < 4 * prec_bits + 8; ++iter) {
        mpz_class a = floor(rem).floor_to_mpz();
        mpz_class h_new = a * h_prev + h, k_new = a * k_prev + k;
        h = h_prev;
        k = k_prev;
        h_prev = h_new;
        k_prev = k_new;
        if (k_prev > den_bound) {
            break;
        }
        mpq_class cand(h_prev, k_prev);
        cand.canonicalize();
        Real err = abs(x - Real(cand, wp));
        out.value = cand;
        out.residual_log2 = err.is_zero() ? -INFINITY : err.log2_abs() - max(abs(x), Real(1L, wp)).log2_abs();
        if (err <= tol) {
            out.found = true;
            return out;
        }
        Real frac = rem - Real(a, wp);
        if (frac.is_zero()) {
            break;
        }
        rem = Real(1L, wp) / frac;
    }
    out.found = false;
    return out;
}

} // namespace jderiv

#endif
