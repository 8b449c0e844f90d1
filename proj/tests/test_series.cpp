#include <gtest/gtest.h>

#include <random>

#include "jderiv/series.hpp"

using namespace jderiv;

namespace
{

QSeries from_ints(long lead, std::vector<long> c)
{
    std::vector<mpq_class> q;
    for (long v : c) {
        q.emplace_back(v);
    }
    return QSeries(lead, std::move(q));
}

// q * prod (1 - q^n)^24, truncated to n_terms coefficients starting at q^1.
QSeries delta_product(std::size_t n_terms)
{
    std::vector<mpz_class> p(n_terms, 0);
    p[0] = 1;
    for (std::size_t n = 1; n < n_terms; ++n) {
        for (int rep = 0; rep < 24; ++rep) {
            for (std::size_t i = n_terms; i-- > n;) {
                p[i] -= p[i - n];
            }
        }
    }
    std::vector<mpq_class> q(p.begin(), p.end());
    return QSeries(1, std::move(q));
}

} // namespace

TEST(Series, EisensteinLowOrder)
{
    EXPECT_EQ(eisenstein(2, 3), from_ints(0, {1, -24, -72}));
    EXPECT_EQ(eisenstein(4, 2), from_ints(0, {1, 240}));
    EXPECT_EQ(eisenstein(6, 1), from_ints(0, {1}));
    EXPECT_THROW(eisenstein(8, 3), DomainError);
    EXPECT_THROW(eisenstein(3, 3), DomainError);
}

TEST(Series, Arithmetic)
{
    QSeries prod = from_ints(0, {1, 1, 0}) * from_ints(0, {1, -1, 0});
    EXPECT_EQ(prod, from_ints(0, {1, 0, -1}));

    QSeries inv = QSeries::constant(1, 3) / named_series(SeriesName::delta, 3);
    EXPECT_EQ(inv, from_ints(-1, {1, 24, 324}));
    EXPECT_EQ(pow(eisenstein(4, 5), 3).coeff(0), 1);
    EXPECT_THROW(QSeries::constant(1, 3) / QSeries::zero(3), DomainError);
}

TEST(Series, Theta)
{
    EXPECT_EQ(theta(from_ints(-1, {1, 744, 196884})), from_ints(-1, {-1, 0, 196884}));
    EXPECT_TRUE(theta(QSeries::constant(5, 4)).is_zero());
    EXPECT_EQ(theta(theta(QSeries::monomial(2, 3))), QSeries::monomial(2, 3, 4));
}

TEST(Series, NamedSeries)
{
    EXPECT_EQ(named_series(SeriesName::j, 3), from_ints(-1, {1, 744, 196884}));
    EXPECT_EQ(named_series(SeriesName::delta, 2), from_ints(1, {1, -24}));
    EXPECT_EQ(named_series(SeriesName::f, 2), from_ints(-1, {1, -240}));
    EXPECT_EQ(named_series(SeriesName::e4cubed_minus_e6sq, 2), from_ints(1, {1728, -41472}));
    QSeries j = named_series(SeriesName::j, 8);
    EXPECT_EQ(j.coeff(2), mpz_class("21493760"));
    EXPECT_EQ(j.coeff(3), mpz_class("864299970"));
}

TEST(Series, DeltaMatchesProductFormula)
{
    for (std::size_t n : {5u, 20u, 60u}) {
        EXPECT_EQ(named_series(SeriesName::delta, n), delta_product(n)) << n;
    }
    const auto &t = detail::eisenstein_tables(40);
    QSeries dp = delta_product(40);
    for (long i = 0; i < 40; ++i) {
        EXPECT_EQ(mpq_class(t.delta_over_q[i]), dp.coeff(i + 1));
    }
}

TEST(Series, ProductIdentities)
{
    const std::size_t n = 30;
    QSeries e2 = eisenstein(2, n + 2), e4 = eisenstein(4, n + 2), e6 = eisenstein(6, n + 2);
    QSeries delta = named_series(SeriesName::delta, n + 2);
    QSeries j = named_series(SeriesName::j, n), f = named_series(SeriesName::f, n), chi = named_series(SeriesName::chi, n);
    QSeries disc = named_series(SeriesName::e4cubed_minus_e6sq, n + 2);
    EXPECT_EQ(j * disc, (mpq_class(1728) * pow(e4, 3)).truncated(j.order() + 1));
    EXPECT_EQ(j * delta, pow(e4, 3).truncated(j.order() + 1));
    EXPECT_EQ(f * delta, (e4 * e6).truncated(f.order() + 1));
    EXPECT_EQ(chi * delta, (e2 * e4 * e6).truncated(chi.order() + 1));
    EXPECT_TRUE(j.integral() && f.integral() && chi.integral());
}

TEST(Series, ThetaIsDerivation)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<long> a(6), b(6);
        for (auto &v : a) {
            v = static_cast<long>(rng() % 21) - 10;
        }
        for (auto &v : b) {
            v = static_cast<long>(rng() % 21) - 10;
        }
        a[0] = a[0] == 0 ? 1 : a[0];
        b[0] = b[0] == 0 ? 1 : b[0];
        QSeries x = from_ints(-1, a), y = from_ints(2, b);
        EXPECT_EQ(theta(x * y), theta(x) * y + x * theta(y));
    }
}

TEST(Series, DivisorSum)
{
    EXPECT_EQ(divisor_sum(12, 1), 28);
    EXPECT_EQ(divisor_sum(6, 3), 1 + 8 + 27 + 216);
    EXPECT_EQ(divisor_sum(1, 5), 1);
}
