#ifndef JDERIV_RANDOM_HPP
#define JDERIV_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string>

#include <gmpxx.h>

#include "jderiv/complex.hpp"
#include "jderiv/evaluator.hpp"
#include "jderiv/mat2z.hpp"

namespace jderiv
{

/// Seeded generator with platform-independent derived distributions.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}

    std::uint64_t next()
    {
        return m_engine();
    }
    /// Uniform in [0, 1) with 53 random bits.
    double unit()
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * unit();
    }
    /// Uniform integer in [lo, hi] by rejection.
    long uniform_int(long lo, long hi)
    {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return lo + static_cast<long>(x % span);
    }

private:
    std::mt19937_64 m_engine;
};

/// Box for random points; doubles are exact binary values, so inputs are reproducible.
struct TauBox {
    double re_lo = -0.5, re_hi = 0.5, im_lo = 0.9, im_hi = 3.0;
};

inline HPComplex random_tau(Rng &rng, int prec_bits, const TauBox &box = {})
{
    double re = rng.uniform(box.re_lo, box.re_hi);
    double im = rng.uniform(box.im_lo, box.im_hi);
    return HPComplex::from_double(re, im, working_prec(prec_bits)).tagged(prec_bits);
}

/// Random element of SL2(Z) with all entries bounded by `bound` in absolute value.
inline Mat2Z random_sl2(Rng &rng, long bound)
{
    for (;;) {
        long c = rng.uniform_int(-bound, bound);
        long d = rng.uniform_int(-bound, bound);
        mpz_class g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), mpz_class(d).get_mpz_t(), mpz_class(c).get_mpz_t());
        if (g != 1) {
            continue;
        }
        // s d + t c = 1, so (a, b) = (s, -t) gives a d - b c = 1; shift by multiples of (c, d).
        mpz_class a = s, b = -t;
        if (c != 0) {
            mpz_class k;
            mpz_fdiv_q(k.get_mpz_t(), mpz_class(a + (c > 0 ? c : -c) / 2).get_mpz_t(), mpz_class(c).get_mpz_t());
            a -= k * c;
            b -= k * d;
        } else {
            mpz_class k;
            mpz_fdiv_q(k.get_mpz_t(), mpz_class(b + (d > 0 ? d : -d) / 2).get_mpz_t(), mpz_class(d).get_mpz_t());
            b -= k * d;
            // c = 0: also randomize the translation part
            b += d * rng.uniform_int(-bound, bound);
        }
        if (abs(a) <= bound && abs(b) <= bound) {
            return Mat2Z(a, b, mpz_class(c), mpz_class(d));
        }
    }
}

/// 64-bit FNV-1a digest, printed as 16 hex digits.
inline std::uint64_t fnv1a(const std::string &s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex_digest(const std::string &s)
{
    static const char *digits = "0123456789abcdef";
    std::uint64_t h = fnv1a(s);
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace jderiv

#endif
