#ifndef JDERIV_CMFIELDS_HPP
#define JDERIV_CMFIELDS_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "jderiv/complex.hpp"
#include "jderiv/errors.hpp"
#include "jderiv/evaluator.hpp"
#include "jderiv/mat2z.hpp"

namespace jderiv
{

namespace detail
{

inline mpz_class gcd3(const mpz_class &a, const mpz_class &b, const mpz_class &c)
{
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

/// Splits n != 0 as sign * s * f^2 with s squarefree positive; returns (sign * s, f).
inline std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class &n)
{
    if (n == 0) {
        throw DomainError("squarefree part of zero");
    }
    mpz_class m = abs(n), s = 1, f = 1;
    for (mpz_class p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        for (int k = 0; k < e / 2; ++k) {
            f *= p;
        }
        if (e % 2 == 1) {
            s *= p;
        }
    }
    s *= m;
    return {n < 0 ? mpz_class(-s) : s, f};
}

inline bool valid_discriminant(long d)
{
    long r = ((d % 4) + 4) % 4;
    return d < 0 && (r == 0 || r == 1);
}

} // namespace detail

/// Imaginary quadratic tau: the upper root of A tau^2 + B tau + C = 0, gcd(A,B,C) = 1, A > 0.
struct QuadraticPoint {
    mpz_class A, B, C;
    mpz_class D; // B^2 - 4AC < 0

    /// (-B + i sqrt|D|) / (2A)
    HPComplex value(int prec_bits) const
    {
        const mpfr_prec_t p = working_prec(prec_bits);
        Real two_a(mpz_class(2 * A), p);
        return HPComplex(Real(mpz_class(-B), p) / two_a, sqrt(Real(mpz_class(-D), p)) / two_a, prec_bits);
    }
    /// Squarefree part of D (negative).
    mpz_class field() const
    {
        return detail::squarefree_split(D).first;
    }
    std::string to_string() const
    {
        return "qpoint(" + A.get_str() + "," + B.get_str() + "," + C.get_str() + ")";
    }
    friend bool operator==(const QuadraticPoint &x, const QuadraticPoint &y)
    {
        return x.A == y.A && x.B == y.B && x.C == y.C;
    }
};

inline QuadraticPoint qpoint(const mpz_class &a, const mpz_class &b, const mpz_class &c)
{
    if (a <= 0) {
        throw DomainError("qpoint: A must be positive");
    }
    mpz_class d = b * b - 4 * a * c;
    if (d >= 0) {
        throw DomainError("qpoint: discriminant must be negative");
    }
    if (detail::gcd3(a, b, c) != 1) {
        throw DomainError("qpoint: (A,B,C) must be primitive");
    }
    return {a, b, c, d};
}

inline QuadraticPoint qpoint(long a, long b, long c)
{
    return qpoint(mpz_class(a), mpz_class(b), mpz_class(c));
}

struct BinaryForm {
    long a, b, c;
    friend bool operator==(const BinaryForm &x, const BinaryForm &y)
    {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
};

/// Reduced primitive forms of discriminant D, ordered by a, then |b|, positive b first.
inline std::vector<BinaryForm> reduced_forms(long d)
{
    if (!detail::valid_discriminant(d)) {
        throw DomainError("reduced_forms: D=" + std::to_string(d) + " is not a negative discriminant (0 or 1 mod 4)");
    }
    std::vector<BinaryForm> out;
    const long n = -d;
    for (long a = 1; 3 * a * a <= n; ++a) {
        for (long babs = 0; babs <= a; ++babs) {
            for (int sign = 1; sign >= -1; sign -= 2) {
                if (sign < 0 && babs == 0) {
                    continue;
                }
                const long b = sign * babs;
                long num = b * b - d;
                if (num % (4 * a) != 0) {
                    continue;
                }
                long c = num / (4 * a);
                if (c < a) {
                    continue;
                }
                if ((babs == a || a == c) && b < 0) {
                    continue;
                }
                if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) {
                    continue;
                }
                out.push_back({a, b, c});
            }
        }
    }
    return out;
}

inline long class_number(long d)
{
    return static_cast<long>(reduced_forms(d).size());
}

/// One point (-b + sqrt D)/(2a) per reduced form, all in the closed fundamental domain.
inline std::vector<QuadraticPoint> heegner_points(long d)
{
    std::vector<QuadraticPoint> pts;
    for (const BinaryForm &f : reduced_forms(d)) {
        pts.push_back(qpoint(f.a, f.b, f.c));
    }
    return pts;
}

/// Desk bound on h(D) for class polynomials.
inline constexpr long default_class_number_bound = 32;

struct ClassPolynomial {
    long D = 0;
    /// Integer coefficients, constant term first; monic.
    std::vector<mpz_class> coeffs;
    /// Largest distance from a computed coefficient to its rounded value.
    double max_residual = 0;
    int prec_bits = 0;

    long degree() const
    {
        return static_cast<long>(coeffs.size()) - 1;
    }
    std::string to_string() const
    {
        std::string s;
        for (long k = degree(); k >= 0; --k) {
            const mpz_class &c = coeffs[static_cast<std::size_t>(k)];
            if (c == 0) {
                continue;
            }
            mpz_class mag = abs(c);
            std::string term;
            if (k == 0 || mag != 1) {
                term = mag.get_str();
            }
            if (k >= 1) {
                term += (term.empty() ? "" : "*") + std::string("X") + (k > 1 ? "^" + std::to_string(k) : "");
            }
            if (s.empty()) {
                s = (c < 0 ? "-" : "") + term;
            } else {
                s += (c < 0 ? " - " : " + ") + term;
            }
        }
        return s.empty() ? "0" : s;
    }
};

/// prod (X - j(tau_i)) over Heegner points of D, rounded to integers.
/**
 * The working precision is raised to cover sum log2 |j(tau_i)| plus a safety margin,
 * and doubled when a coefficient is not within 2^-40 of an integer.
 */
inline ClassPolynomial hilbert_class_poly(long d, int prec_bits = 128, long h_bound = default_class_number_bound)
{
    std::vector<QuadraticPoint> pts = heegner_points(d);
    if (static_cast<long>(pts.size()) > h_bound) {
        throw DomainError("hilbert_class_poly: h(D)=" + std::to_string(pts.size()) + " exceeds desk bound");
    }
    double size_bits = 0;
    for (const QuadraticPoint &t : pts) {
        // |j| ~ exp(2 pi Im tau) = exp(pi sqrt|D| / a)
        size_bits += M_PI * std::sqrt(static_cast<double>(-d)) / t.A.get_d() / std::log(2.0) + 11;
    }
    int p = std::max(prec_bits, static_cast<int>(size_bits) + 64);
    for (int attempt = 0; attempt < 6; ++attempt, p *= 2) {
        const mpfr_prec_t wp = working_prec(p);
        std::vector<HPComplex> poly{HPComplex::from_long(1, wp)};
        for (const QuadraticPoint &t : pts) {
            HPComplex r = eval_J(t.value(p), p).j;
            poly.push_back(HPComplex(Real(wp), Real(wp)));
            for (std::size_t m = poly.size() - 1; m >= 1; --m) {
                poly[m] = poly[m - 1] - poly[m] * r;
            }
            poly[0] = -(poly[0] * r);
        }
        ClassPolynomial out;
        out.D = d;
        out.prec_bits = p;
        bool ok = true;
        for (const HPComplex &c : poly) {
            mpz_class z = c.re.round_to_mpz();
            double err = max(abs(c.re - Real(z, wp)), abs(c.im)).to_double();
            out.max_residual = std::max(out.max_residual, err);
            ok = ok && err < std::ldexp(1.0, -40);
            out.coeffs.push_back(z);
        }
        if (ok) {
            return out;
        }
    }
    throw PrecisionError("hilbert_class_poly: rounding did not settle for D=" + std::to_string(d));
}

/// tau and sigma are GL2+(Q)-equivalent iff Q(tau) = Q(sigma).
inline bool same_gl2q_orbit(const QuadraticPoint &tau, const QuadraticPoint &sigma)
{
    return tau.field() == sigma.field();
}

/// The point g sigma, computed exactly from sigma's quadratic form.
inline QuadraticPoint transform_point(const Mat2Z &g, const QuadraticPoint &s)
{
    const mpz_class &a = g.a, &b = g.b, &c = g.c, &d = g.d;
    mpz_class A = s.A * d * d - s.B * c * d + s.C * c * c;
    mpz_class B = -2 * s.A * b * d + s.B * (a * d + b * c) - 2 * s.C * a * c;
    mpz_class C = s.A * b * b - s.B * a * b + s.C * a * a;
    mpz_class gg = detail::gcd3(A, B, C);
    A /= gg;
    B /= gg;
    C /= gg;
    if (A < 0) {
        A = -A;
        B = -B;
        C = -C;
    }
    return qpoint(A, B, C);
}

/// Primitive upper-triangular g with g sigma = tau; requires Q(tau) = Q(sigma).
inline Mat2Z upper_triangular_map(const QuadraticPoint &sigma, const QuadraticPoint &tau)
{
    if (!same_gl2q_orbit(sigma, tau)) {
        throw DomainError("upper_triangular_map: points lie in different fields");
    }
    // sqrt(D'/D) is rational: D'/D = (f'/f)^2 for the common squarefree kernel.
    mpz_class f = detail::squarefree_split(sigma.D).second;
    mpz_class f2 = detail::squarefree_split(tau.D).second;
    mpq_class r(f2, f);
    r.canonicalize();
    mpq_class p = r * mpq_class(sigma.A, tau.A);
    p.canonicalize();
    mpq_class q = mpq_class(-tau.B, 2 * tau.A) + p * mpq_class(sigma.B, 2 * sigma.A);
    q.canonicalize();
    // (p, q; 0, 1) scaled to a primitive integer matrix.
    mpz_class den;
    mpz_lcm(den.get_mpz_t(), p.get_den_mpz_t(), q.get_den_mpz_t());
    mpz_class P = p.get_num() * (den / p.get_den());
    mpz_class Q = q.get_num() * (den / q.get_den());
    mpz_class g = detail::gcd3(P, Q, den);
    Mat2Z m(P / g, Q / g, mpz_class(0), den / g);
    if (!(transform_point(m, sigma) == tau)) {
        throw ConsistencyError("upper_triangular_map: exact solve failed for " + sigma.to_string() + " -> " +
                               tau.to_string());
    }
    return m;
}

struct OrbitBlock {
    /// 0-based coordinate indices; the first is the block leader.
    std::vector<std::size_t> indices;
    QuadraticPoint base;
    /// matrices[k] maps base to coordinate indices[k + 1].
    std::vector<Mat2Z> matrices;
    std::vector<mpz_class> dets;
};

struct SpecialDecomposition {
    std::vector<OrbitBlock> blocks;
};

/// Partitions a quadratic tuple into GL2+(Q)-orbits and relates each coordinate to its leader.
inline SpecialDecomposition decompose_tuple(const std::vector<QuadraticPoint> &tuple)
{
    SpecialDecomposition out;
    for (std::size_t k = 0; k < tuple.size(); ++k) {
        auto it = std::find_if(out.blocks.begin(), out.blocks.end(),
                               [&](const OrbitBlock &b) { return same_gl2q_orbit(b.base, tuple[k]); });
        if (it == out.blocks.end()) {
            out.blocks.push_back({{k}, tuple[k], {}, {}});
            continue;
        }
        Mat2Z g = upper_triangular_map(it->base, tuple[k]);
        it->indices.push_back(k);
        it->dets.push_back(g.det());
        it->matrices.push_back(std::move(g));
    }
    return out;
}

/// Discriminant attached to a tuple: the coordinate discriminant of largest |D|.
inline mpz_class tuple_discriminant(const std::vector<QuadraticPoint> &tuple)
{
    if (tuple.empty()) {
        throw DomainError("tuple_discriminant: empty tuple");
    }
    mpz_class best = tuple.front().D;
    for (const QuadraticPoint &t : tuple) {
        if (abs(t.D) > abs(best)) {
            best = t.D;
        }
    }
    return best;
}

struct SiegelRow {
    long D;
    double d_quarter; // |D|^(1/4)
    long h;
};

inline std::vector<SiegelRow> siegel_table(const std::vector<long> &ds)
{
    std::vector<SiegelRow> rows;
    for (long d : ds) {
        rows.push_back({d, std::pow(static_cast<double>(-d), 0.25), class_number(d)});
    }
    return rows;
}

} // namespace jderiv

#endif
