#ifndef JDERIV_REAL_HPP
#define JDERIV_REAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "jderiv/errors.hpp"

namespace jderiv
{

namespace detail
{

inline mpfr_prec_t &thread_default_prec()
{
    thread_local mpfr_prec_t prec = 128;
    return prec;
}

} // namespace detail

/// Precision (in bits) used by Real objects constructed without an explicit precision.
inline mpfr_prec_t default_prec()
{
    return detail::thread_default_prec();
}

/// Scoped override of the thread's default precision.
class PrecisionScope
{
public:
    explicit PrecisionScope(mpfr_prec_t bits) : m_saved(detail::thread_default_prec())
    {
        detail::thread_default_prec() = std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN);
    }
    PrecisionScope(const PrecisionScope &) = delete;
    PrecisionScope &operator=(const PrecisionScope &) = delete;
    ~PrecisionScope()
    {
        detail::thread_default_prec() = m_saved;
    }

private:
    mpfr_prec_t m_saved;
};

/// Arbitrary-precision binary floating-point number (RAII over mpfr_t).
/**
 * Binary operations produce a result at the larger of the operand precisions,
 * rounded to nearest. Copies keep the source precision.
 */
class Real
{
public:
    Real() : Real(default_prec()) {}
    explicit Real(mpfr_prec_t prec)
    {
        mpfr_init2(m_v, prec);
        mpfr_set_zero(m_v, 1);
    }
    Real(long v, mpfr_prec_t prec) : Real(prec)
    {
        mpfr_set_si(m_v, v, MPFR_RNDN);
    }
    Real(int v, mpfr_prec_t prec) : Real(static_cast<long>(v), prec) {}
    Real(double v, mpfr_prec_t prec) : Real(prec)
    {
        mpfr_set_d(m_v, v, MPFR_RNDN);
    }
    Real(const mpz_class &v, mpfr_prec_t prec) : Real(prec)
    {
        mpfr_set_z(m_v, v.get_mpz_t(), MPFR_RNDN);
    }
    Real(const mpq_class &v, mpfr_prec_t prec) : Real(prec)
    {
        mpfr_set_q(m_v, v.get_mpq_t(), MPFR_RNDN);
    }
    /// Parses a decimal string (e.g. "1.25", "-3e-7").
    Real(const std::string &s, mpfr_prec_t prec) : Real(prec)
    {
        if (s.empty() || mpfr_set_str(m_v, s.c_str(), 10, MPFR_RNDN) != 0) {
            throw DomainError("cannot parse real number '" + s + "'");
        }
    }
    // Real(p) means zero at precision p; forbid Real(int) so it is never mistaken for a value.
    Real(int) = delete;

    Real(const Real &o)
    {
        mpfr_init2(m_v, mpfr_get_prec(o.m_v));
        mpfr_set(m_v, o.m_v, MPFR_RNDN);
    }
    Real(Real &&o) noexcept
    {
        // Steal the limbs, leave o as a valid minimal-precision zero.
        m_v[0] = o.m_v[0];
        mpfr_init2(o.m_v, MPFR_PREC_MIN);
        mpfr_set_zero(o.m_v, 1);
    }
    Real &operator=(const Real &o)
    {
        if (this != &o) {
            mpfr_set_prec(m_v, mpfr_get_prec(o.m_v));
            mpfr_set(m_v, o.m_v, MPFR_RNDN);
        }
        return *this;
    }
    Real &operator=(Real &&o) noexcept
    {
        if (this != &o) {
            std::swap(m_v[0], o.m_v[0]);
        }
        return *this;
    }
    ~Real()
    {
        mpfr_clear(m_v);
    }

    mpfr_ptr get()
    {
        return m_v;
    }
    mpfr_srcptr get() const
    {
        return m_v;
    }
    mpfr_prec_t prec() const
    {
        return mpfr_get_prec(m_v);
    }
    /// Changes the stored precision, rounding the value.
    void set_prec(mpfr_prec_t p)
    {
        mpfr_prec_round(m_v, p, MPFR_RNDN);
    }
    Real with_prec(mpfr_prec_t p) const
    {
        Real r(p);
        mpfr_set(r.m_v, m_v, MPFR_RNDN);
        return r;
    }

    bool is_zero() const
    {
        return mpfr_zero_p(m_v) != 0;
    }
    bool is_finite() const
    {
        return mpfr_number_p(m_v) != 0;
    }
    int sign() const
    {
        return mpfr_sgn(m_v);
    }
    double to_double() const
    {
        return mpfr_get_d(m_v, MPFR_RNDN);
    }
    /// log2 |x| as a double; -inf for zero.
    double log2_abs() const
    {
        if (is_zero()) {
            return -INFINITY;
        }
        long e = 0;
        double m = mpfr_get_d_2exp(&e, m_v, MPFR_RNDN);
        return std::log2(std::fabs(m)) + static_cast<double>(e);
    }
    /// Nearest integer (ties away from zero).
    mpz_class round_to_mpz() const
    {
        mpz_class z;
        Real t(prec());
        mpfr_round(t.m_v, m_v);
        mpfr_get_z(z.get_mpz_t(), t.m_v, MPFR_RNDN);
        return z;
    }
    mpz_class floor_to_mpz() const
    {
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), m_v, MPFR_RNDD);
        return z;
    }
    /// Decimal string with the given number of significant digits.
    std::string to_string(int digits) const
    {
        if (is_zero()) {
            return "0";
        }
        char *buf = nullptr;
        mpfr_asprintf(&buf, "%.*Rg", digits, m_v);
        std::unique_ptr<char, void (*)(char *)> guard(buf, +[](char *p) { mpfr_free_str(p); });
        return std::string(buf);
    }
    /// Short scientific representation used in reports.
    std::string to_sci(int digits = 6) const
    {
        char *buf = nullptr;
        mpfr_asprintf(&buf, "%.*Re", digits, m_v);
        std::unique_ptr<char, void (*)(char *)> guard(buf, +[](char *p) { mpfr_free_str(p); });
        return std::string(buf);
    }

    Real &operator+=(const Real &o)
    {
        widen(o);
        mpfr_add(m_v, m_v, o.m_v, MPFR_RNDN);
        return *this;
    }
    Real &operator-=(const Real &o)
    {
        widen(o);
        mpfr_sub(m_v, m_v, o.m_v, MPFR_RNDN);
        return *this;
    }
    Real &operator*=(const Real &o)
    {
        widen(o);
        mpfr_mul(m_v, m_v, o.m_v, MPFR_RNDN);
        return *this;
    }
    Real &operator/=(const Real &o)
    {
        widen(o);
        mpfr_div(m_v, m_v, o.m_v, MPFR_RNDN);
        return *this;
    }
    Real &operator*=(long v)
    {
        mpfr_mul_si(m_v, m_v, v, MPFR_RNDN);
        return *this;
    }
    Real &operator/=(long v)
    {
        mpfr_div_si(m_v, m_v, v, MPFR_RNDN);
        return *this;
    }
    Real operator-() const
    {
        Real r(*this);
        mpfr_neg(r.m_v, r.m_v, MPFR_RNDN);
        return r;
    }

    static Real pi(mpfr_prec_t prec)
    {
        Real r(prec);
        mpfr_const_pi(r.m_v, MPFR_RNDN);
        return r;
    }
    /// 2^e at the given precision.
    static Real pow2(long e, mpfr_prec_t prec)
    {
        Real r(1L, prec);
        mpfr_mul_2si(r.m_v, r.m_v, e, MPFR_RNDN);
        return r;
    }

private:
    void widen(const Real &o)
    {
        if (o.prec() > prec()) {
            mpfr_prec_round(m_v, o.prec(), MPFR_RNDN);
        }
    }

    mpfr_t m_v;
};

inline Real operator+(Real a, const Real &b)
{
    a += b;
    return a;
}
inline Real operator-(Real a, const Real &b)
{
    a -= b;
    return a;
}
inline Real operator*(Real a, const Real &b)
{
    a *= b;
    return a;
}
inline Real operator/(Real a, const Real &b)
{
    a /= b;
    return a;
}
inline Real operator*(Real a, long b)
{
    a *= b;
    return a;
}
inline Real operator*(long b, Real a)
{
    a *= b;
    return a;
}
inline Real operator/(Real a, long b)
{
    a /= b;
    return a;
}

inline int cmp(const Real &a, const Real &b)
{
    return mpfr_cmp(a.get(), b.get());
}
inline bool operator<(const Real &a, const Real &b)
{
    return cmp(a, b) < 0;
}
inline bool operator>(const Real &a, const Real &b)
{
    return cmp(a, b) > 0;
}
inline bool operator<=(const Real &a, const Real &b)
{
    return cmp(a, b) <= 0;
}
inline bool operator>=(const Real &a, const Real &b)
{
    return cmp(a, b) >= 0;
}
inline bool operator==(const Real &a, const Real &b)
{
    return mpfr_equal_p(a.get(), b.get()) != 0;
}

namespace detail
{

template <typename F>
Real unary(const Real &x, F f)
{
    Real r(x.prec());
    f(r.get(), x.get(), MPFR_RNDN);
    return r;
}

} // namespace detail

inline Real abs(const Real &x)
{
    return detail::unary(x, mpfr_abs);
}
inline Real sqrt(const Real &x)
{
    return detail::unary(x, mpfr_sqrt);
}
inline Real exp(const Real &x)
{
    return detail::unary(x, mpfr_exp);
}
inline Real log(const Real &x)
{
    return detail::unary(x, mpfr_log);
}
inline Real sin(const Real &x)
{
    return detail::unary(x, mpfr_sin);
}
inline Real cos(const Real &x)
{
    return detail::unary(x, mpfr_cos);
}
inline Real floor(const Real &x)
{
    Real r(x.prec());
    mpfr_floor(r.get(), x.get());
    return r;
}
inline Real atan2(const Real &y, const Real &x)
{
    Real r(std::max(x.prec(), y.prec()));
    mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
    return r;
}
inline Real pow(const Real &x, long n)
{
    Real r(x.prec());
    mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
    return r;
}
/// x * 2^e
inline Real ldexp(const Real &x, long e)
{
    Real r(x);
    mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
    return r;
}
inline Real max(const Real &a, const Real &b)
{
    return a < b ? b : a;
}

inline std::ostream &operator<<(std::ostream &os, const Real &x)
{
    return os << x.to_string(static_cast<int>(x.prec() * 0.30103) + 1);
}

} // namespace jderiv

#endif
