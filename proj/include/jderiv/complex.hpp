#ifndef JDERIV_COMPLEX_HPP
#define JDERIV_COMPLEX_HPP

#include <algorithm>
#include <string>
#include <utility>

#include "jderiv/real.hpp"

namespace jderiv
{

/// Arbitrary-precision complex number with an accuracy tag.
/**
 * `re` and `im` are held at the working precision (usually the tag plus guard
 * bits). `prec_bits` is the accuracy the value claims; arithmetic between two
 * values carries the smaller tag.
 */
struct HPComplex {
    static constexpr int min_prec_bits = 64;

    Real re;
    Real im;
    int prec_bits = min_prec_bits;

    HPComplex() : re(default_prec()), im(default_prec()) {}
    HPComplex(Real r, Real i, int tag) : re(std::move(r)), im(std::move(i)), prec_bits(std::max(tag, min_prec_bits)) {}
    HPComplex(Real r, Real i) : re(std::move(r)), im(std::move(i))
    {
        prec_bits = std::max<int>(min_prec_bits, static_cast<int>(std::min(re.prec(), im.prec())));
    }
    explicit HPComplex(const Real &r) : HPComplex(r, Real(r.prec())) {}

    static HPComplex from_double(double r, double i, mpfr_prec_t work)
    {
        return HPComplex(Real(r, work), Real(i, work));
    }
    static HPComplex from_long(long r, mpfr_prec_t work)
    {
        return HPComplex(Real(r, work), Real(work));
    }
    /// Parses "re,im" (decimal) or a single real "re".
    static HPComplex parse(const std::string &s, mpfr_prec_t work)
    {
        auto comma = s.find(',');
        if (comma == std::string::npos) {
            return HPComplex(Real(s, work), Real(work));
        }
        return HPComplex(Real(s.substr(0, comma), work), Real(s.substr(comma + 1), work));
    }
    /// i * x
    static HPComplex i_times(const Real &x)
    {
        return HPComplex(Real(x.prec()), x);
    }

    mpfr_prec_t work_prec() const
    {
        return std::max(re.prec(), im.prec());
    }
    HPComplex with_work_prec(mpfr_prec_t p) const
    {
        return HPComplex(re.with_prec(p), im.with_prec(p), prec_bits);
    }
    HPComplex tagged(int tag) const
    {
        return HPComplex(re, im, tag);
    }
    bool is_zero() const
    {
        return re.is_zero() && im.is_zero();
    }

    HPComplex &operator+=(const HPComplex &o)
    {
        re += o.re;
        im += o.im;
        prec_bits = std::min(prec_bits, o.prec_bits);
        return *this;
    }
    HPComplex &operator-=(const HPComplex &o)
    {
        re -= o.re;
        im -= o.im;
        prec_bits = std::min(prec_bits, o.prec_bits);
        return *this;
    }
    HPComplex &operator*=(const HPComplex &o)
    {
        Real r = re * o.re - im * o.im;
        Real i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        prec_bits = std::min(prec_bits, o.prec_bits);
        return *this;
    }
    HPComplex &operator/=(const HPComplex &o)
    {
        if (o.is_zero()) {
            throw DomainError("complex division by zero");
        }
        Real den = o.re * o.re + o.im * o.im;
        Real r = (re * o.re + im * o.im) / den;
        Real i = (im * o.re - re * o.im) / den;
        re = std::move(r);
        im = std::move(i);
        prec_bits = std::min(prec_bits, o.prec_bits);
        return *this;
    }
    HPComplex &operator*=(const Real &s)
    {
        re *= s;
        im *= s;
        return *this;
    }
    HPComplex &operator/=(const Real &s)
    {
        re /= s;
        im /= s;
        return *this;
    }
    HPComplex &operator*=(long s)
    {
        re *= s;
        im *= s;
        return *this;
    }
    HPComplex &operator/=(long s)
    {
        re /= s;
        im /= s;
        return *this;
    }
    HPComplex operator-() const
    {
        return HPComplex(-re, -im, prec_bits);
    }
};

inline HPComplex operator+(HPComplex a, const HPComplex &b)
{
    a += b;
    return a;
}
inline HPComplex operator-(HPComplex a, const HPComplex &b)
{
    a -= b;
    return a;
}
inline HPComplex operator*(HPComplex a, const HPComplex &b)
{
    a *= b;
    return a;
}
inline HPComplex operator/(HPComplex a, const HPComplex &b)
{
    a /= b;
    return a;
}
inline HPComplex operator*(HPComplex a, const Real &s)
{
    a *= s;
    return a;
}
inline HPComplex operator*(const Real &s, HPComplex a)
{
    a *= s;
    return a;
}
inline HPComplex operator/(HPComplex a, const Real &s)
{
    a /= s;
    return a;
}
inline HPComplex operator*(HPComplex a, long s)
{
    a *= s;
    return a;
}
inline HPComplex operator*(long s, HPComplex a)
{
    a *= s;
    return a;
}
inline HPComplex operator/(HPComplex a, long s)
{
    a /= s;
    return a;
}
inline HPComplex operator+(HPComplex a, const Real &s)
{
    a.re += s;
    return a;
}
inline HPComplex operator-(HPComplex a, const Real &s)
{
    a.re -= s;
    return a;
}

inline Real norm(const HPComplex &z)
{
    return z.re * z.re + z.im * z.im;
}
inline Real abs(const HPComplex &z)
{
    Real r(z.work_prec());
    mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
    return r;
}
inline HPComplex conj(const HPComplex &z)
{
    return HPComplex(z.re, -z.im, z.prec_bits);
}
inline HPComplex exp(const HPComplex &z)
{
    Real m = exp(z.re);
    return HPComplex(m * cos(z.im), m * sin(z.im), z.prec_bits);
}
inline HPComplex pow(const HPComplex &z, unsigned n)
{
    HPComplex result(Real(1L, z.work_prec()), Real(z.work_prec()), z.prec_bits);
    HPComplex base = z;
    while (n != 0) {
        if (n & 1u) {
            result *= base;
        }
        n >>= 1;
        if (n != 0) {
            base *= base;
        }
    }
    return result;
}
/// Relative distance |a - b| / max(1, |b|).
inline Real relative_residual(const HPComplex &a, const HPComplex &b)
{
    Real scale = max(abs(b), Real(1L, b.work_prec()));
    return abs(a - b) / scale;
}

inline std::string to_string(const HPComplex &z, int digits)
{
    std::string im = z.im.to_string(digits);
    if (!im.empty() && im[0] != '-') {
        im = "+" + im;
    }
    return z.re.to_string(digits) + im + "i";
}

} // namespace jderiv

#endif
