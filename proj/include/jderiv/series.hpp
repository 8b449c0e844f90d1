#ifndef JDERIV_SERIES_HPP
#define JDERIV_SERIES_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "jderiv/errors.hpp"

namespace jderiv
{

/// Truncated Laurent series in q with exact rational coefficients.
/**
 * Represents sum_{i < n_terms} coeffs[i] q^(lead_exp + i) + O(q^(lead_exp + n_terms)).
 * The leading coefficient is nonzero unless the series is zero to its order, in which
 * case coeffs is empty and lead_exp holds the truncation order.
 */
class QSeries
{
public:
    QSeries() = default;
    QSeries(long lead_exp, std::vector<mpq_class> coeffs) : m_lead(lead_exp), m_coeffs(std::move(coeffs))
    {
        normalize();
    }

    static QSeries constant(const mpq_class &v, std::size_t n_terms)
    {
        std::vector<mpq_class> c(n_terms);
        if (n_terms > 0) {
            c[0] = v;
        }
        return QSeries(0, std::move(c));
    }
    /// q^e known to n_terms coefficients.
    static QSeries monomial(long e, std::size_t n_terms, const mpq_class &coeff = 1)
    {
        std::vector<mpq_class> c(n_terms);
        if (n_terms > 0) {
            c[0] = coeff;
        }
        return QSeries(e, std::move(c));
    }
    static QSeries zero(long order)
    {
        return QSeries(order, {});
    }

    long lead_exp() const
    {
        return m_lead;
    }
    std::size_t n_terms() const
    {
        return m_coeffs.size();
    }
    /// Exponent of the first unknown coefficient.
    long order() const
    {
        return m_lead + static_cast<long>(m_coeffs.size());
    }
    bool is_zero() const
    {
        return m_coeffs.empty();
    }
    const std::vector<mpq_class> &coeffs() const
    {
        return m_coeffs;
    }
    /// Coefficient of q^e; zero below the leading exponent.
    mpq_class coeff(long e) const
    {
        if (e >= order()) {
            throw DomainError("coefficient of q^" + std::to_string(e) + " is beyond the truncation order");
        }
        if (e < m_lead) {
            return 0;
        }
        return m_coeffs[static_cast<std::size_t>(e - m_lead)];
    }
    bool integral() const
    {
        return std::all_of(m_coeffs.begin(), m_coeffs.end(), [](const mpq_class &x) { return x.get_den() == 1; });
    }
    /// Drops every term of exponent >= new_order.
    QSeries truncated(long new_order) const
    {
        if (new_order >= order()) {
            return *this;
        }
        if (new_order <= m_lead) {
            return zero(new_order);
        }
        return QSeries(m_lead, std::vector<mpq_class>(m_coeffs.begin(), m_coeffs.begin() + (new_order - m_lead)));
    }
    /// Keeps at most n coefficients.
    QSeries with_terms(std::size_t n) const
    {
        return truncated(m_lead + static_cast<long>(std::min(n, n_terms())));
    }

    std::string to_string() const
    {
        if (is_zero()) {
            return "O(q^" + std::to_string(order()) + ")";
        }
        std::string s;
        for (std::size_t i = 0; i < m_coeffs.size(); ++i) {
            if (m_coeffs[i] == 0) {
                continue;
            }
            long e = m_lead + static_cast<long>(i);
            std::string c = m_coeffs[i].get_str();
            if (!s.empty()) {
                s += (c[0] == '-') ? " - " : " + ";
                if (c[0] == '-') {
                    c.erase(0, 1);
                }
            }
            s += c;
            if (e != 0) {
                s += "*q^" + std::to_string(e);
            }
        }
        return s + " + O(q^" + std::to_string(order()) + ")";
    }

    friend bool operator==(const QSeries &x, const QSeries &y)
    {
        return x.m_lead == y.m_lead && x.m_coeffs == y.m_coeffs;
    }

private:
    void normalize()
    {
        std::size_t k = 0;
        while (k < m_coeffs.size() && m_coeffs[k] == 0) {
            ++k;
        }
        if (k > 0) {
            m_coeffs.erase(m_coeffs.begin(), m_coeffs.begin() + static_cast<std::ptrdiff_t>(k));
            m_lead += static_cast<long>(k);
        }
    }

    long m_lead = 0;
    std::vector<mpq_class> m_coeffs;
};

inline std::ostream &operator<<(std::ostream &os, const QSeries &s)
{
    return os << s.to_string();
}

namespace detail
{

inline QSeries add_sub(const QSeries &a, const QSeries &b, bool subtract)
{
    long order = std::min(a.order(), b.order());
    long lead = std::min(a.lead_exp(), b.lead_exp());
    if (order <= lead) {
        if (a.is_zero() || b.is_zero()) {
            return QSeries::zero(order);
        }
        throw DomainError("series sum has an empty valid range");
    }
    std::vector<mpq_class> c(static_cast<std::size_t>(order - lead));
    for (long e = lead; e < order; ++e) {
        mpq_class v = a.coeff(e);
        if (subtract) {
            v -= b.coeff(e);
        } else {
            v += b.coeff(e);
        }
        c[static_cast<std::size_t>(e - lead)] = v;
    }
    return QSeries(lead, std::move(c));
}

} // namespace detail

inline QSeries operator+(const QSeries &a, const QSeries &b)
{
    return detail::add_sub(a, b, false);
}
inline QSeries operator-(const QSeries &a, const QSeries &b)
{
    return detail::add_sub(a, b, true);
}
inline QSeries operator-(const QSeries &a)
{
    std::vector<mpq_class> c = a.coeffs();
    for (auto &x : c) {
        x = -x;
    }
    return a.is_zero() ? a : QSeries(a.lead_exp(), std::move(c));
}
/// Scalar multiple.
inline QSeries operator*(const mpq_class &s, const QSeries &a)
{
    if (s == 0) {
        return QSeries::zero(a.order());
    }
    std::vector<mpq_class> c = a.coeffs();
    for (auto &x : c) {
        x *= s;
    }
    return QSeries(a.lead_exp(), std::move(c));
}

/// Product; the result carries min(n_terms) coefficients (relative precision).
inline QSeries operator*(const QSeries &a, const QSeries &b)
{
    if (a.is_zero() || b.is_zero()) {
        long order = a.is_zero() ? a.order() + (b.is_zero() ? b.order() : b.lead_exp()) : a.lead_exp() + b.order();
        return QSeries::zero(order);
    }
    std::size_t n = std::min(a.n_terms(), b.n_terms());
    std::vector<mpq_class> c(n);
    const auto &ac = a.coeffs();
    const auto &bc = b.coeffs();
    for (std::size_t i = 0; i < n; ++i) {
        if (ac[i] == 0) {
            continue;
        }
        for (std::size_t k = 0; i + k < n; ++k) {
            c[i + k] += ac[i] * bc[k];
        }
    }
    return QSeries(a.lead_exp() + b.lead_exp(), std::move(c));
}

/// Quotient a / b; b must have a nonzero leading coefficient.
inline QSeries operator/(const QSeries &a, const QSeries &b)
{
    if (b.is_zero()) {
        throw DomainError("division by a series that is zero to its truncation order");
    }
    if (a.is_zero()) {
        return QSeries::zero(a.order() - b.lead_exp());
    }
    std::size_t n = std::min(a.n_terms(), b.n_terms());
    const auto &ac = a.coeffs();
    const auto &bc = b.coeffs();
    std::vector<mpq_class> c(n);
    mpq_class inv_lead = 1 / bc[0];
    for (std::size_t i = 0; i < n; ++i) {
        mpq_class v = ac[i];
        for (std::size_t k = 1; k <= i; ++k) {
            v -= bc[k] * c[i - k];
        }
        c[i] = v * inv_lead;
    }
    return QSeries(a.lead_exp() - b.lead_exp(), std::move(c));
}

/// Integer power (negative exponents invert first).
inline QSeries pow(const QSeries &a, long k)
{
    if (k < 0) {
        return pow(QSeries::constant(1, a.n_terms()) / a, -k);
    }
    QSeries result = QSeries::constant(1, a.is_zero() ? 1 : a.n_terms());
    QSeries base = a;
    while (k != 0) {
        if (k & 1) {
            result = result * base;
        }
        k >>= 1;
        if (k != 0) {
            base = base * base;
        }
    }
    return result;
}

enum class SeriesOp { add, sub, mul, div, pow };

/// Dispatcher over the Laurent-series arithmetic (b is a series, or an exponent for pow).
inline QSeries series_arith(SeriesOp op, const QSeries &a, const std::variant<QSeries, long> &b)
{
    if (op == SeriesOp::pow) {
        if (!std::holds_alternative<long>(b)) {
            throw DomainError("pow requires an integer exponent");
        }
        return pow(a, std::get<long>(b));
    }
    if (!std::holds_alternative<QSeries>(b)) {
        throw DomainError("binary series operation requires a series operand");
    }
    const QSeries &s = std::get<QSeries>(b);
    switch (op) {
    case SeriesOp::add:
        return a + s;
    case SeriesOp::sub:
        return a - s;
    case SeriesOp::mul:
        return a * s;
    case SeriesOp::div:
        return a / s;
    default:
        break;
    }
    throw DomainError("unknown series operation");
}

/// theta = q d/dq: multiplies the coefficient of q^m by m.
inline QSeries theta(const QSeries &a)
{
    if (a.is_zero()) {
        return a;
    }
    std::vector<mpq_class> c = a.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] *= a.lead_exp() + static_cast<long>(i);
    }
    return QSeries(a.lead_exp(), std::move(c));
}

/// sigma_k(n) by divisor enumeration.
inline mpz_class divisor_sum(unsigned long n, unsigned k)
{
    mpz_class s = 0;
    for (unsigned long d = 1; d * d <= n; ++d) {
        if (n % d != 0) {
            continue;
        }
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), d, k);
        s += t;
        unsigned long e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(t.get_mpz_t(), e, k);
            s += t;
        }
    }
    return s;
}

/// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, k in {2,4,6}.
inline QSeries eisenstein(int k, std::size_t n_terms)
{
    long factor = 0;
    switch (k) {
    case 2:
        factor = -24;
        break;
    case 4:
        factor = 240;
        break;
    case 6:
        factor = -504;
        break;
    default:
        throw DomainError("eisenstein: weight must be 2, 4 or 6, got " + std::to_string(k));
    }
    if (n_terms == 0) {
        throw DomainError("eisenstein: n_terms must be positive");
    }
    std::vector<mpq_class> c(n_terms);
    c[0] = 1;
    for (std::size_t n = 1; n < n_terms; ++n) {
        c[n] = mpq_class(factor * divisor_sum(n, static_cast<unsigned>(k - 1)));
    }
    return QSeries(0, std::move(c));
}

enum class SeriesName { j, delta, chi, f, e4cubed_minus_e6sq };

inline SeriesName parse_series_name(const std::string &s)
{
    static const std::map<std::string, SeriesName> names{{"j", SeriesName::j},
                                                         {"delta", SeriesName::delta},
                                                         {"chi", SeriesName::chi},
                                                         {"f", SeriesName::f},
                                                         {"e4cubed_minus_e6sq", SeriesName::e4cubed_minus_e6sq}};
    auto it = names.find(s);
    if (it == names.end()) {
        throw DomainError("unknown series name '" + s + "'");
    }
    return it->second;
}

/// Exact expansions of j, Delta, chi, f and E4^3 - E6^2 with n_terms coefficients.
inline QSeries named_series(SeriesName name, std::size_t n_terms)
{
    if (n_terms == 0) {
        throw DomainError("named_series: n_terms must be positive");
    }
    // E4^3 - E6^2 starts at q^1; one extra Eisenstein term keeps n_terms after the shift.
    const std::size_t m = n_terms + 1;
    QSeries e4 = eisenstein(4, m);
    QSeries e6 = eisenstein(6, m);
    QSeries disc = pow(e4, 3) - pow(e6, 2);
    QSeries delta = mpq_class(1, 1728) * disc;
    switch (name) {
    case SeriesName::e4cubed_minus_e6sq:
        return disc.with_terms(n_terms);
    case SeriesName::delta:
        return delta.with_terms(n_terms);
    case SeriesName::j:
        return (pow(e4, 3) / delta).with_terms(n_terms);
    case SeriesName::f:
        return ((e4 * e6) / delta).with_terms(n_terms);
    case SeriesName::chi:
        return ((eisenstein(2, m) * e4 * e6) / delta).with_terms(n_terms);
    }
    throw DomainError("unknown series name");
}

namespace detail
{

/// Exact integer coefficient tables of E2, E4, E6 (from q^0) and Delta/q (from q^0).
struct EisensteinTables {
    std::vector<mpz_class> e2, e4, e6, delta_over_q;
};

/// Shared, grow-only table cache. Entries are never mutated once published.
inline const EisensteinTables &eisenstein_tables(std::size_t n)
{
    static std::mutex mtx;
    static std::map<std::size_t, EisensteinTables> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.lower_bound(n);
    if (it != cache.end()) {
        return it->second;
    }
    // Round up so that nearby requests share one table.
    std::size_t size = 64;
    while (size < n) {
        size *= 2;
    }
    EisensteinTables t;
    QSeries e2 = eisenstein(2, size), e4 = eisenstein(4, size), e6 = eisenstein(6, size);
    QSeries delta = named_series(SeriesName::delta, size);
    t.e2.resize(size);
    t.e4.resize(size);
    t.e6.resize(size);
    t.delta_over_q.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        long e = static_cast<long>(i);
        t.e2[i] = e2.coeff(e).get_num();
        t.e4[i] = e4.coeff(e).get_num();
        t.e6[i] = e6.coeff(e).get_num();
        t.delta_over_q[i] = delta.coeff(e + 1).get_num();
    }
    return cache.emplace(size, std::move(t)).first->second;
}

} // namespace detail

} // namespace jderiv

#endif
