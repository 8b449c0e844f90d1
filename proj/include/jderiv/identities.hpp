#ifndef JDERIV_IDENTITIES_HPP
#define JDERIV_IDENTITIES_HPP

#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "jderiv/cmfields.hpp"
#include "jderiv/complex.hpp"
#include "jderiv/errors.hpp"
#include "jderiv/evaluator.hpp"
#include "jderiv/mat2z.hpp"
#include "jderiv/modpoly.hpp"
#include "jderiv/recognize.hpp"

namespace jderiv
{

/// p_c(W, X, Z) = -(1/6) Z^2 (X - 7W + 6912) / (W (W - 1728)) + i Z / c.
/**
 * With W = j, X = chi*, Z = j' and c = Im tau this reproduces j''. The overall sign of
 * the first term follows from theta E4 = (E2 E4 - E6)/3 and theta E6 = (E2 E6 - E4^2)/2.
 * Throws PoleProximityError when W is within 2^(-prec/2) (relative) of 0 or 1728.
 */
inline HPComplex p_c_eval(const Real &c, const HPComplex &w, const HPComplex &x, const HPComplex &z)
{
    if (c.sign() <= 0) {
        throw DomainError("p_c: c must be positive");
    }
    const mpfr_prec_t p = std::max(w.work_prec(), z.work_prec());
    const int tag = std::min({w.prec_bits, x.prec_bits, z.prec_bits});
    const Real tol = Real::pow2(-tag / 2, p) * Real(1728L, p);
    const HPComplex w1728 = w - Real(1728L, p);
    if (abs(w) < tol || abs(w1728) < tol) {
        throw PoleProximityError("p_c: W=" + to_string(w, 20) + " too close to a pole (0 or 1728)");
    }
    HPComplex num = z * z * (x - w * 7L + Real(6912L, p));
    HPComplex lead = -(num / (w * w1728)) / 6L;
    return lead + HPComplex::i_times(Real(1L, p) / c) * z;
}

/// |p_{Im tau}(j, chi*, j') - j''| / max(1, |j''|).
inline Real check_masser(const HPComplex &tau, int prec_bits)
{
    ModularValues v = evaluate(tau, prec_bits);
    HPComplex lhs = p_c_eval(v.tau.im, v.j, v.chistar, v.jp);
    return relative_residual(lhs, v.jpp);
}

struct WeightLawResiduals {
    Real j, jp, jpp, f, e2star, chistar;

    Real max() const
    {
        Real m = j;
        for (const Real *r : {&jp, &jpp, &f, &e2star, &chistar}) {
            m = jderiv::max(m, *r);
        }
        return m;
    }
};

/// Residuals of the weight laws of j', j'' (depth one), f, E2*, and invariance of j, chi*.
inline WeightLawResiduals check_weight_laws(const HPComplex &tau, const Mat2Z &gamma, int prec_bits)
{
    if (gamma.det() != 1) {
        throw DomainError("check_weight_laws: gamma must lie in SL2(Z)");
    }
    const mpfr_prec_t p = working_prec(prec_bits);
    const HPComplex t = tau.with_work_prec(p);
    ModularValues a = evaluate(t, prec_bits);
    ModularValues b = evaluate(gamma.act(t).tagged(prec_bits), prec_bits);
    const HPComplex e = gamma.cofactor(t), e2 = e * e;
    const Real c(gamma.c, p);
    return {
        relative_residual(b.j, a.j),
        relative_residual(b.jp, e2 * a.jp),
        relative_residual(b.jpp, e2 * e2 * a.jpp + e2 * e * c * 2L * a.jp),
        relative_residual(b.f, a.f / e2),
        relative_residual(b.e2star, e2 * a.e2star),
        relative_residual(b.chistar, a.chistar),
    };
}

/// |j'(g tau) + lambda_N(j(tau), j(g tau)) j'(tau) m_g(tau)| / max(1, |j'(g tau)|).
inline Real check_gl2_law(const HPComplex &tau, const Mat2Z &g, int prec_bits, const ModularPolynomial &phi)
{
    if (!g.primitive() || g.det() != phi.level()) {
        throw DomainError("check_gl2_law: g must be primitive with det " + std::to_string(phi.level()));
    }
    const HPComplex t = tau.with_work_prec(working_prec(prec_bits));
    JValues a = eval_J(t, prec_bits);
    JValues b = eval_J(g.act(t).tagged(prec_bits), prec_bits);
    HPComplex lam = lambda_eval(phi, a.j, b.j);
    HPComplex rhs = -(lam * a.jp * m_g(g, t));
    return relative_residual(b.jp, rhs);
}

inline Real check_gl2_law(const HPComplex &tau, const Mat2Z &g, int prec_bits)
{
    const long n = g.det().get_si();
    return check_gl2_law(tau, g, prec_bits, phi_for_level(n));
}

/// Both readings of the second-derivative relation under a change of cofactor.
struct MuCalcResult {
    /// LHS against the right side as displayed, with the (c0 d - c d0) anomaly factor.
    Real displayed;
    /// LHS against the right side implied by the implicit-differentiation mu_N:
    /// j''(g tau) e0^4/e^4 + 2 j'(g tau) e0^3 (c0 e - c e0) / (N e^3).
    Real covariant;
    HPComplex lhs, rhs_displayed, rhs_covariant;
};

/// Evaluates mu_N(j(tau), j(g tau), j'(tau), j'(g tau) e0^2/e^2, j''(tau), c0, e0) with
/// e = c tau + d and e0 = c0 tau0 + d0, and compares it with both right-hand sides.
inline MuCalcResult check_mu_calc(const HPComplex &tau, const HPComplex &tau0, const Mat2Z &g, long c0, long d0,
                                  int prec_bits, const ModularPolynomial &phi)
{
    if (!g.primitive() || g.det() != phi.level()) {
        throw DomainError("check_mu_calc: g must be primitive with det " + std::to_string(phi.level()));
    }
    if (std::gcd(c0, d0) != 1) {
        throw DomainError("check_mu_calc: (c0, d0) must be a coprime pair (a row of SL2(Z))");
    }
    const mpfr_prec_t p = working_prec(prec_bits);
    const HPComplex t = tau.with_work_prec(p), t0 = tau0.with_work_prec(p);
    JValues a = eval_J(t, prec_bits);
    JValues b = eval_J(g.act(t).tagged(prec_bits), prec_bits);
    const HPComplex e = g.cofactor(t), e0 = t0 * Real(c0, p) + Real(d0, p);
    const HPComplex r = e0 / e, r2 = r * r, r3 = r2 * r;
    const Real N(g.det(), p), c(g.c, p), d(g.d, p), C0(c0, p), D0(d0, p);

    MuCalcResult out;
    out.lhs = mu_n(phi, a.j, b.j, a.jp, b.jp * r2, a.jpp, C0, e0);
    out.rhs_displayed = b.jpp * r2 * r2 + b.jp * r3 * (C0 * d - c * D0) * 2L;
    HPComplex anomaly = e * C0 - e0 * c;
    out.rhs_covariant = b.jpp * r2 * r2 + b.jp * r3 * anomaly * 2L / N;
    out.displayed = relative_residual(out.lhs, out.rhs_displayed);
    out.covariant = relative_residual(out.lhs, out.rhs_covariant);
    return out;
}

inline MuCalcResult check_mu_calc(const HPComplex &tau, const HPComplex &tau0, const Mat2Z &g, long c0, long d0,
                                  int prec_bits)
{
    return check_mu_calc(tau, tau0, g, c0, d0, prec_bits, phi_for_level(g.det().get_si()));
}

/// Collinearity defect of c -> mu_N(..., c, e) at three c values, relative to the values.
inline Real mu_linearity_defect(const HPComplex &tau, const Mat2Z &g, int prec_bits, const ModularPolynomial &phi,
                                long c1 = -3, long c2 = 1, long c3 = 7)
{
    const mpfr_prec_t p = working_prec(prec_bits);
    const HPComplex t = tau.with_work_prec(p);
    JValues a = eval_J(t, prec_bits);
    JValues b = eval_J(g.act(t).tagged(prec_bits), prec_bits);
    const HPComplex e = g.cofactor(t);
    auto mu = [&](long c) { return mu_n(phi, a.j, b.j, a.jp, b.jp, a.jpp, Real(c, p), e); };
    HPComplex m1 = mu(c1), m2 = mu(c2), m3 = mu(c3);
    // (m3 - m1)(c2 - c1) - (m2 - m1)(c3 - c1) vanishes for an affine function of c.
    HPComplex defect = (m3 - m1) * (c2 - c1) - (m2 - m1) * (c3 - c1);
    Real scale = max(max(abs(m1), abs(m2)), max(abs(m3), Real(1L, p)));
    return abs(defect) / (scale * Real(std::labs(c3 - c1) * std::labs(c2 - c1), p));
}

struct GaloisPairing {
    long D = 0;
    bool pass = false;
    /// Coefficients of A (constant first) with A(j(tau_i)) = chi*(tau_i).
    std::vector<mpq_class> coeffs;
    /// Per coefficient: log2 distance from the recognized rational at prec.
    std::vector<double> residual_log2;
    /// Same at the verification precision.
    std::vector<double> verify_residual_log2;
    int prec_bits = 0, verify_prec_bits = 0;
    std::string failure;
};

namespace detail
{

/// Complex interpolation coefficients of A with A(x_i) = y_i (constant first).
inline std::vector<HPComplex> pairing_poly(const std::vector<QuadraticPoint> &pts, int prec_bits)
{
    std::vector<HPComplex> xs, ys;
    for (const QuadraticPoint &t : pts) {
        ModularValues v = evaluate(t.value(prec_bits), prec_bits);
        xs.push_back(v.j);
        ys.push_back(v.chistar);
    }
    return interpolate(xs, ys);
}

} // namespace detail

/// chi* paired with j over the Heegner points of D: the interpolating polynomial must have
/// rational coefficients, recognized at prec and reproduced at 1.5x prec.
inline GaloisPairing galois_pairing_check(long d, int prec_bits, const std::vector<QuadraticPoint> &points = {})
{
    GaloisPairing out;
    out.D = d;
    out.prec_bits = prec_bits;
    out.verify_prec_bits = prec_bits + prec_bits / 2;
    std::vector<QuadraticPoint> pts = points.empty() ? heegner_points(d) : points;
    if (static_cast<long>(pts.size()) > default_class_number_bound) {
        throw DomainError("galois_pairing_check: h(D) exceeds desk bound");
    }
    std::vector<HPComplex> a = detail::pairing_poly(pts, prec_bits);
    std::vector<HPComplex> av = detail::pairing_poly(pts, out.verify_prec_bits);
    out.pass = true;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const Real scale = max(abs(a[k]), Real(1L, a[k].work_prec()));
        const double im_log2 = a[k].im.log2_abs() - scale.log2_abs();
        RationalResult r = rational_reconstruct(a[k].re, prec_bits);
        out.coeffs.push_back(r.value);
        out.residual_log2.push_back(std::max(r.residual_log2, im_log2));
        if (!r.found || im_log2 > -prec_bits / 2.0) {
            out.pass = false;
            out.failure += "coefficient " + std::to_string(k) + " not recognized; ";
            out.verify_residual_log2.push_back(0);
            continue;
        }
        const mpfr_prec_t vp = av[k].work_prec();
        const Real vscale = max(abs(av[k]), Real(1L, vp));
        HPComplex diff = av[k] - Real(r.value, vp);
        double vr = abs(diff).is_zero() ? -INFINITY : abs(diff).log2_abs() - vscale.log2_abs();
        out.verify_residual_log2.push_back(vr);
        if (vr > -out.verify_prec_bits / 2.0) {
            out.pass = false;
            out.failure += "coefficient " + std::to_string(k) + " moved at verification precision; ";
        }
    }
    return out;
}

} // namespace jderiv

#endif
