#ifndef JDERIV_EVALUATOR_HPP
#define JDERIV_EVALUATOR_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "jderiv/complex.hpp"
#include "jderiv/errors.hpp"
#include "jderiv/mat2z.hpp"
#include "jderiv/series.hpp"

namespace jderiv
{

/// Guard bits added to every requested precision.
inline constexpr int guard_bits = 64;

/// Smallest accepted imaginary part, 2^-16.
inline constexpr double min_imag_part = 1.0 / 65536.0;

inline mpfr_prec_t working_prec(int prec_bits)
{
    return static_cast<mpfr_prec_t>(std::max(prec_bits, HPComplex::min_prec_bits) + guard_bits);
}

/// Result of reducing a point into the closed fundamental domain.
struct Reduction {
    HPComplex tau0;
    /// tau = gamma * tau0, det gamma = 1.
    Mat2Z gamma;
    int steps = 0;
};

/// Reduces tau into {|Re| <= 1/2, |tau| >= 1}.
/**
 * Stops at the first point satisfying both closed conditions (tolerance
 * 2^(-prec/2)); on the boundary the returned word is whichever reached it.
 */
inline Reduction reduce_to_F(const HPComplex &tau)
{
    if (tau.im.sign() <= 0) {
        throw DomainError("reduce_to_F: Im tau must be positive");
    }
    const mpfr_prec_t p = tau.work_prec();
    const double im = tau.im.to_double();
    const int bound = static_cast<int>(10.0 * (1.0 + std::max(0.0, std::log2(1.0 / im))));
    const Real half_tol = Real(1L, p) / 2 + Real::pow2(-static_cast<long>(p) / 2, p);
    const Real one_tol = Real(1L, p) - Real::pow2(-static_cast<long>(p) / 2, p);
    const Real half(0.5, p);

    Reduction r;
    r.tau0 = tau.with_work_prec(p);
    Mat2Z m; // tau0 = m * tau
    for (int step = 0; step <= bound; ++step) {
        bool shifted = false;
        if (abs(r.tau0.re) > half_tol) {
            mpz_class n = floor(r.tau0.re + half).floor_to_mpz();
            r.tau0.re -= Real(n, p);
            m = Mat2Z::T(-n) * m;
            shifted = true;
        }
        if (norm(r.tau0) < one_tol) {
            r.tau0 = -(HPComplex(Real(1L, p), Real(p), r.tau0.prec_bits) / r.tau0);
            m = Mat2Z::S() * m;
            r.steps = step + 1;
            continue;
        }
        if (!shifted || abs(r.tau0.re) <= half_tol) {
            r.steps = step + 1;
            r.gamma = m.inverse_sl2();
            return r;
        }
    }
    throw PrecisionError("reduce_to_F: no convergence within " + std::to_string(bound) +
                         " steps (precision exhausted)");
}

/// Truncation order n such that sum_{n' > n} 600 n'^7 |q|^n' < 2^-(target_bits + 8).
/**
 * 600 n^7 majorizes the coefficients of E2, E4, E6 and of Delta/q (Deligne's bound).
 */
inline std::size_t truncation_order(double log2_abs_q, int target_bits)
{
    if (!(log2_abs_q < 0)) {
        throw DomainError("truncation_order: |q| must be < 1");
    }
    const double goal = -static_cast<double>(target_bits) - 8.0;
    for (std::size_t n = 1;; ++n) {
        double next = static_cast<double>(n + 1);
        double ratio_log = 7.0 * std::log2((next + 1.0) / next) + log2_abs_q;
        if (ratio_log >= 0) {
            continue;
        }
        double first = std::log2(600.0) + 7.0 * std::log2(next) + next * log2_abs_q;
        double tail = first - std::log2(1.0 - std::exp2(ratio_log));
        if (tail < goal) {
            return n + 1;
        }
    }
}

/// Value of a q-series at a point with a tail estimate.
struct QSeriesValue {
    HPComplex value;
    /// log2 of the estimated truncation tail (absolute); -inf when the visible tail is zero.
    double tail_log2 = -INFINITY;
};

namespace detail
{

inline HPComplex q_of(const HPComplex &tau)
{
    const mpfr_prec_t p = tau.work_prec();
    Real two_pi = Real::pi(p) * 2L;
    Real mod = exp(-(two_pi * tau.im));
    Real arg = two_pi * tau.re;
    return HPComplex(mod * cos(arg), mod * sin(arg), tau.prec_bits);
}

/// sum_{i < n} c_i q^i by Horner, coefficients from an integer table.
inline HPComplex horner(const std::vector<mpz_class> &table, std::size_t n, const HPComplex &q)
{
    const mpfr_prec_t p = q.work_prec();
    HPComplex acc{Real(p), Real(p), q.prec_bits};
    for (std::size_t i = n; i-- > 0;) {
        acc *= q;
        acc.re += Real(table[i], p);
    }
    return acc;
}

} // namespace detail

/// Sums s at q = exp(2 pi i tau). Callers reduce first when Im tau < 0.1.
inline QSeriesValue eval_qseries(const QSeries &s, const HPComplex &tau, int prec_bits)
{
    if (tau.im.to_double() < 0.1) {
        throw DomainError("eval_qseries: Im tau must be >= 0.1 (reduce first)");
    }
    const mpfr_prec_t p = working_prec(prec_bits);
    HPComplex t = tau.with_work_prec(p);
    HPComplex q = detail::q_of(t);
    QSeriesValue out;
    out.value = HPComplex(Real(p), Real(p), prec_bits);
    if (s.is_zero()) {
        return out;
    }
    HPComplex acc{Real(p), Real(p), prec_bits};
    const auto &c = s.coeffs();
    for (std::size_t i = c.size(); i-- > 0;) {
        acc *= q;
        acc.re += Real(c[i], p);
    }
    // q^lead
    HPComplex lead = s.lead_exp() >= 0 ? pow(q, static_cast<unsigned>(s.lead_exp()))
                                       : HPComplex(Real(1L, p), Real(p)) / pow(q, static_cast<unsigned>(-s.lead_exp()));
    out.value = (acc * lead).tagged(prec_bits);

    // Geometric continuation of the last two stored terms; a series ending in
    // zeros is bounded by its largest coefficient at the first unknown power.
    const double lq = abs(q).log2_abs();
    const std::size_t n = c.size();
    auto term_log2 = [&](std::size_t i) {
        return Real(c[i], 64).log2_abs() + lq * static_cast<double>(s.lead_exp() + static_cast<long>(i));
    };
    double growth = lq;
    double first;
    if (c[n - 1] != 0) {
        if (n >= 2 && c[n - 2] != 0) {
            growth = std::min(-1e-3, term_log2(n - 1) - term_log2(n - 2));
        }
        first = term_log2(n - 1) + growth;
    } else {
        double big = -INFINITY;
        for (const auto &v : c) {
            big = std::max(big, Real(v, 64).log2_abs());
        }
        first = big + lq * static_cast<double>(s.order());
    }
    out.tail_log2 = first - std::log2(1.0 - std::exp2(growth));
    double scale = std::max(0.0, abs(out.value).log2_abs());
    if (out.tail_log2 > scale - prec_bits) {
        throw PrecisionError("eval_qseries: truncation order too small for " + std::to_string(prec_bits) + " bits");
    }
    return out;
}

/// Everything the evaluator knows at one point.
struct ModularValues {
    HPComplex tau;
    Reduction reduction;
    HPComplex j, jp, jpp;
    HPComplex e2, e2star, chi, f, chistar;
};

/// Eisenstein values at a point with Im tau large enough for fast convergence.
struct EisensteinValues {
    HPComplex e2, e4, e6, delta;
    std::size_t n_terms = 0;
};

/// Sums E2, E4, E6 and Delta at tau with the truncation-order policy (or an explicit order).
inline EisensteinValues eisenstein_values(const HPComplex &tau, int target_bits, std::size_t n_terms = 0)
{
    HPComplex q = detail::q_of(tau);
    if (n_terms == 0) {
        n_terms = truncation_order(abs(q).log2_abs(), target_bits);
    }
    const auto &tables = detail::eisenstein_tables(n_terms);
    EisensteinValues v;
    v.n_terms = n_terms;
    v.e2 = detail::horner(tables.e2, n_terms, q);
    v.e4 = detail::horner(tables.e4, n_terms, q);
    v.e6 = detail::horner(tables.e6, n_terms, q);
    v.delta = q * detail::horner(tables.delta_over_q, n_terms, q);
    return v;
}

/// Evaluates j, j', j'', E2, E2*, chi, f, chi* at tau.
/**
 * Works at the reduced point tau0 (tau = gamma tau0) and transports:
 *   j'(gamma t) = (ct+d)^2 j'(t),  j''(gamma t) = (ct+d)^4 j''(t) + 2c(ct+d)^3 j'(t),
 *   f(gamma t) = (ct+d)^-2 f(t),   E2(gamma t) = (ct+d)^2 E2(t) + 6c(ct+d)/(pi i).
 * At tau0, with theta = q d/dq: theta j = -E4^2 E6 / Delta and
 * theta^2 j = (E4^4/2 + 2 E4 E6^2/3 - E2 E4^2 E6/6) / Delta.
 */
inline ModularValues evaluate(const HPComplex &tau, int prec_bits)
{
    if (tau.im.sign() <= 0) {
        throw DomainError("evaluate: Im tau must be positive");
    }
    if (tau.im.to_double() < min_imag_part) {
        throw DomainError("evaluate: Im tau below 2^-16 is out of range");
    }
    const mpfr_prec_t p = working_prec(prec_bits);
    PrecisionScope scope(p);

    ModularValues out;
    out.tau = tau.with_work_prec(p).tagged(prec_bits);
    out.reduction = reduce_to_F(out.tau);
    const HPComplex &t0 = out.reduction.tau0;
    const Mat2Z &g = out.reduction.gamma;

    EisensteinValues ev = eisenstein_values(t0, static_cast<int>(p));
    const HPComplex e4sq = ev.e4 * ev.e4;
    const HPComplex theta_j = -(e4sq * ev.e6) / ev.delta;
    HPComplex theta2 = e4sq * e4sq / 2L;
    theta2 += (ev.e4 * ev.e6 * ev.e6 * 2L) / 3L;
    theta2 -= (ev.e2 * e4sq * ev.e6) / 6L;
    theta2 /= ev.delta;

    const Real pi = Real::pi(p);
    const HPComplex two_pi_i = HPComplex::i_times(pi * 2L);
    const HPComplex j0 = e4sq * ev.e4 / ev.delta;
    const HPComplex jp0 = two_pi_i * theta_j;
    const HPComplex jpp0 = two_pi_i * two_pi_i * theta2;
    const HPComplex f0 = ev.e4 * ev.e6 / ev.delta;

    const HPComplex e = g.cofactor(t0);
    const HPComplex e2 = e * e;
    const Real c(g.c, p);
    out.j = j0;
    out.jp = e2 * jp0;
    out.jpp = e2 * e2 * jpp0 + (e2 * e * c * 2L) * jp0;
    out.f = f0 / e2;
    // (6c/(pi i)) e = -(6c/pi) i e
    out.e2 = e2 * ev.e2 - HPComplex::i_times(c * 6L / pi) * e;
    out.chi = out.e2 * out.f;
    const Real y = out.tau.im;
    const Real three_over_pi_y = Real(3L, p) / (pi * y);
    out.e2star = out.e2 - three_over_pi_y;
    out.chistar = out.chi - out.f * three_over_pi_y;

    for (HPComplex *v : {&out.j, &out.jp, &out.jpp, &out.e2, &out.e2star, &out.chi, &out.f, &out.chistar}) {
        v->prec_bits = prec_bits;
    }
    return out;
}

struct JValues {
    HPComplex j, jp, jpp;
};

/// J(tau) = (j(tau), j'(tau), j''(tau)).
inline JValues eval_J(const HPComplex &tau, int prec_bits)
{
    ModularValues v = evaluate(tau, prec_bits);
    return {std::move(v.j), std::move(v.jp), std::move(v.jpp)};
}

struct AuxValues {
    HPComplex chi, f, e2star, chistar;
};

/// (chi, f, E2*, chi*) at tau.
inline AuxValues eval_aux(const HPComplex &tau, int prec_bits)
{
    ModularValues v = evaluate(tau, prec_bits);
    return {std::move(v.chi), std::move(v.f), std::move(v.e2star), std::move(v.chistar)};
}

/// m_g(tau) = (c tau + d)^2 / det g. The cofactor itself is Mat2Z::cofactor.
inline HPComplex m_g(const Mat2Z &g, const HPComplex &tau)
{
    if (tau.im.sign() <= 0) {
        throw DomainError("m_g: Im tau must be positive");
    }
    HPComplex e = g.cofactor(tau);
    return e * e / Real(g.det(), tau.work_prec());
}

} // namespace jderiv

#endif
