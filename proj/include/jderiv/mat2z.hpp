#ifndef JDERIV_MAT2Z_HPP
#define JDERIV_MAT2Z_HPP

#include <ostream>
#include <string>

#include <gmpxx.h>

#include "jderiv/complex.hpp"
#include "jderiv/errors.hpp"

namespace jderiv
{

/// 2x2 integer matrix [[a, b], [c, d]] with positive determinant.
struct Mat2Z {
    mpz_class a{1}, b{0}, c{0}, d{1};

    Mat2Z() = default;
    Mat2Z(mpz_class a_, mpz_class b_, mpz_class c_, mpz_class d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_))
    {
        if (det() <= 0) {
            throw DomainError("matrix determinant must be positive: " + to_string());
        }
    }
    Mat2Z(long a_, long b_, long c_, long d_) : Mat2Z(mpz_class(a_), mpz_class(b_), mpz_class(c_), mpz_class(d_)) {}

    static Mat2Z identity()
    {
        return {};
    }
    /// tau -> -1/tau
    static Mat2Z S()
    {
        return {0, -1, 1, 0};
    }
    /// tau -> tau + n
    static Mat2Z T(const mpz_class &n)
    {
        return {1, n, 0, 1};
    }

    mpz_class det() const
    {
        return a * d - b * c;
    }
    bool primitive() const
    {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        return g == 1;
    }
    bool upper_triangular() const
    {
        return c == 0;
    }
    bool is_identity() const
    {
        return a == 1 && b == 0 && c == 0 && d == 1;
    }
    /// Inverse of an SL2(Z) element.
    Mat2Z inverse_sl2() const
    {
        if (det() != 1) {
            throw DomainError("inverse_sl2 requires determinant 1");
        }
        return {d, -b, -c, a};
    }
    /// Adjugate: inverse up to the factor det.
    Mat2Z adjugate() const
    {
        return {d, -b, -c, a};
    }

    /// c*tau + d
    HPComplex cofactor(const HPComplex &tau) const
    {
        mpfr_prec_t p = tau.work_prec();
        return tau * Real(c, p) + Real(d, p);
    }
    /// Moebius action (a tau + b) / (c tau + d).
    HPComplex act(const HPComplex &tau) const
    {
        mpfr_prec_t p = tau.work_prec();
        HPComplex num = tau * Real(a, p) + Real(b, p);
        return num / cofactor(tau);
    }

    std::string to_string() const
    {
        return "(" + a.get_str() + "," + b.get_str() + ";" + c.get_str() + "," + d.get_str() + ")";
    }

    friend bool operator==(const Mat2Z &x, const Mat2Z &y)
    {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    friend bool operator!=(const Mat2Z &x, const Mat2Z &y)
    {
        return !(x == y);
    }
    friend Mat2Z operator*(const Mat2Z &x, const Mat2Z &y)
    {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend std::ostream &operator<<(std::ostream &os, const Mat2Z &m)
    {
        return os << m.to_string();
    }
};

} // namespace jderiv

#endif
