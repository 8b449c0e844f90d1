#ifndef JDERIV_LLL_HPP
#define JDERIV_LLL_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "jderiv/errors.hpp"
#include "jderiv/real.hpp"

namespace jderiv
{

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// Squared Gram-Schmidt norms of an LLL-reduced basis, kept for quality margins.
struct LLLResult {
    IntMatrix basis;
    std::vector<Real> gs_norm_sq;
    long swaps = 0;
};

/// LLL reduction of the rows of an integer matrix (delta = 0.99).
/**
 * The basis stays exact; the Gram-Schmidt data is floating point at a precision
 * comfortably above the bit size of the entries and is recomputed row by row.
 */
inline LLLResult lll_reduce(IntMatrix basis, double delta = 0.99)
{
    const std::size_t n = basis.size();
    LLLResult out;
    if (n == 0) {
        return out;
    }
    const std::size_t m = basis[0].size();
    std::size_t max_bits = 1;
    for (const auto &row : basis) {
        if (row.size() != m) {
            throw DomainError("lll_reduce: ragged basis");
        }
        for (const auto &v : row) {
            max_bits = std::max(max_bits, mpz_sizeinbase(v.get_mpz_t(), 2));
        }
    }
    const mpfr_prec_t p = static_cast<mpfr_prec_t>(2 * max_bits + 128);
    PrecisionScope scope(p);

    std::vector<std::vector<Real>> bstar(n, std::vector<Real>(m, Real(p)));
    std::vector<Real> bnorm(n, Real(p));
    std::vector<std::vector<Real>> mu(n, std::vector<Real>(n, Real(p)));

    auto dot_int_star = [&](std::size_t k, std::size_t j) {
        Real s(p);
        for (std::size_t c = 0; c < m; ++c) {
            s += Real(basis[k][c], p) * bstar[j][c];
        }
        return s;
    };
    auto orthogonalize = [&](std::size_t k) {
        for (std::size_t c = 0; c < m; ++c) {
            bstar[k][c] = Real(basis[k][c], p);
        }
        for (std::size_t j = 0; j < k; ++j) {
            mu[k][j] = bnorm[j].is_zero() ? Real(p) : dot_int_star(k, j) / bnorm[j];
            for (std::size_t c = 0; c < m; ++c) {
                bstar[k][c] -= mu[k][j] * bstar[j][c];
            }
        }
        Real s(p);
        for (std::size_t c = 0; c < m; ++c) {
            s += bstar[k][c] * bstar[k][c];
        }
        bnorm[k] = s;
    };
    auto size_reduce = [&](std::size_t k) {
        for (std::size_t j = k; j-- > 0;) {
            if (bnorm[j].is_zero()) {
                continue;
            }
            Real mkj = dot_int_star(k, j) / bnorm[j];
            mpz_class r = mkj.round_to_mpz();
            if (r != 0) {
                for (std::size_t c = 0; c < m; ++c) {
                    basis[k][c] -= r * basis[j][c];
                }
            }
        }
    };

    orthogonalize(0);
    const Real d(delta, p);
    std::size_t k = 1;
    long guard = 0;
    const long guard_limit = 100000L * static_cast<long>(n * n) + static_cast<long>(max_bits) * 1000L;
    while (k < n) {
        if (++guard > guard_limit) {
            throw PrecisionError("lll_reduce: iteration limit reached");
        }
        size_reduce(k);
        orthogonalize(k);
        Real lhs = bnorm[k];
        Real rhs = (d - mu[k][k - 1] * mu[k][k - 1]) * bnorm[k - 1];
        if (lhs >= rhs) {
            ++k;
            continue;
        }
        std::swap(basis[k], basis[k - 1]);
        ++out.swaps;
        orthogonalize(k - 1);
        k = std::max<std::size_t>(k - 1, 1);
        if (k == 1) {
            orthogonalize(0);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        orthogonalize(i);
    }
    out.basis = std::move(basis);
    out.gs_norm_sq = std::move(bnorm);
    return out;
}

} // namespace jderiv

#endif
