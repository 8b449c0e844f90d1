#include <gtest/gtest.h>

#include <random>

#include "jderiv/evaluator.hpp"

using namespace jderiv;

namespace
{

constexpr int prec = 256;

HPComplex cx(double re, double im)
{
    return HPComplex::from_double(re, im, working_prec(prec)).tagged(prec);
}

bool close(const HPComplex &a, const HPComplex &b, int bits)
{
    return relative_residual(a, b) < Real::pow2(-bits, 64);
}

Mat2Z random_sl2(std::mt19937_64 &rng, long bound)
{
    std::uniform_int_distribution<long> dist(-bound, bound);
    for (;;) {
        long a = dist(rng), c = dist(rng);
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), mpz_class(a).get_mpz_t(), mpz_class(c).get_mpz_t());
        if (g != 1 || c == 0) {
            continue;
        }
        // a d - b c = 1 via extended gcd, then shift into range.
        mpz_class s, t, gg;
        mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), mpz_class(a).get_mpz_t(), mpz_class(c).get_mpz_t());
        mpz_class d = s, b = -t;
        mpz_class k = mpz_class(b / a);
        b -= k * a;
        d -= k * c;
        if (abs(b) <= bound && abs(d) <= bound) {
            return Mat2Z(mpz_class(a), b, mpz_class(c), d);
        }
    }
}

} // namespace

TEST(Evaluator, ReduceExamples)
{
    Reduction r = reduce_to_F(cx(0.3, 2));
    EXPECT_TRUE(r.gamma.is_identity());
    r = reduce_to_F(cx(0, 0.5));
    EXPECT_EQ(r.gamma, Mat2Z(0, 1, -1, 0));
    EXPECT_TRUE(close(r.tau0, cx(0, 2), 200));
    r = reduce_to_F(cx(5.2, 2));
    EXPECT_EQ(r.gamma, Mat2Z(1, 5, 0, 1));
    HPComplex expect = cx(5.2, 2);
    expect.re -= Real(5L, working_prec(prec));
    EXPECT_TRUE(close(r.tau0, expect, 250));
}

TEST(Evaluator, ReduceReproducesInput)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-20, 20), lim(-12, 2);
    for (int k = 0; k < 200; ++k) {
        HPComplex t = cx(re(rng), std::exp2(lim(rng)));
        Reduction r = reduce_to_F(t);
        EXPECT_EQ(r.gamma.det(), 1);
        EXPECT_LE(std::fabs(r.tau0.re.to_double()), 0.5 + 1e-30);
        EXPECT_GE(norm(r.tau0).to_double(), 1 - 1e-30);
        EXPECT_TRUE(close(r.gamma.act(r.tau0), t, 150));
    }
    EXPECT_THROW(evaluate(cx(0, 1e-10), prec), DomainError);
    EXPECT_THROW(reduce_to_F(cx(0, -1)), DomainError);
}

TEST(Evaluator, SpecialValues)
{
    EXPECT_TRUE(close(eval_J(cx(0, 1), prec).j, HPComplex::from_long(1728, 400), 250));
    EXPECT_TRUE(close(eval_J(cx(0, 2), prec).j, HPComplex::from_long(287496, 400), 250));
    EXPECT_TRUE(close(eval_J(cx(0, std::sqrt(2.0)), 52).j, HPComplex::from_long(8000, 400), 40));
    // j(rho) = 0 and j'(i) = 0.
    const mpfr_prec_t p = working_prec(prec);
    HPComplex rho(Real(-1L, p) / 2, sqrt(Real(3L, p)) / 2, prec);
    EXPECT_LT(abs(eval_J(rho, prec).j).to_double(), 1e-60);
    EXPECT_LT(abs(eval_J(cx(0, 1), prec).jp).to_double(), 1e-60);
    // j(-1/(2i)) = j(i/2) = j(2i).
    EXPECT_TRUE(close(eval_J(cx(0, 0.5), prec).j, HPComplex::from_long(287496, 400), 240));
}

TEST(Evaluator, AgreesWithDirectSeries)
{
    const std::size_t n = 160;
    QSeries j = named_series(SeriesName::j, n);
    QSeries tj = theta(j), ttj = theta(tj);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.9, 3);
    for (int k = 0; k < 10; ++k) {
        HPComplex t = cx(re(rng), im(rng));
        ModularValues v = evaluate(t, prec);
        const mpfr_prec_t p = working_prec(prec);
        HPComplex two_pi_i = HPComplex::i_times(Real::pi(p) * 2L);
        EXPECT_TRUE(close(v.j, eval_qseries(j, t, prec).value, 240));
        EXPECT_TRUE(close(v.jp, two_pi_i * eval_qseries(tj, t, prec).value, 235));
        EXPECT_TRUE(close(v.jpp, two_pi_i * two_pi_i * eval_qseries(ttj, t, prec).value, 230));
        QSeries f = named_series(SeriesName::f, n), chi = named_series(SeriesName::chi, n);
        EXPECT_TRUE(close(v.f, eval_qseries(f, t, prec).value, 240));
        EXPECT_TRUE(close(v.chi, eval_qseries(chi, t, prec).value, 240));
    }
}

TEST(Evaluator, QSeriesTailEstimate)
{
    QSeries j = named_series(SeriesName::j, 60);
    QSeries j2 = named_series(SeriesName::j, 120);
    HPComplex t = cx(0.1, 1.3);
    QSeriesValue a = eval_qseries(j, t, 128);
    QSeriesValue b = eval_qseries(j2, t, 128);
    EXPECT_LT(abs(a.value - b.value).log2_abs(), a.tail_log2 + 1);
    EXPECT_NEAR(eval_qseries(QSeries::constant(1728, 20), t, 128).value.re.to_double(), 1728, 0);
    EXPECT_THROW(eval_qseries(j, cx(0, 0.05), 128), DomainError);
    EXPECT_THROW(eval_qseries(named_series(SeriesName::j, 5), t, 128), PrecisionError);
}

TEST(Evaluator, TransformationLaws)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.9, 3);
    for (int k = 0; k < 30; ++k) {
        HPComplex t = cx(re(rng), im(rng));
        Mat2Z g = random_sl2(rng, 50);
        HPComplex gt = g.act(t).tagged(prec);
        ModularValues a = evaluate(t, prec), b = evaluate(gt, prec);
        HPComplex e = g.cofactor(t), e2 = e * e;
        Real c(g.c, working_prec(prec));
        const int bits = prec / 2;
        EXPECT_TRUE(close(b.j, a.j, bits));
        EXPECT_TRUE(close(b.jp, e2 * a.jp, bits));
        EXPECT_TRUE(close(b.jpp, e2 * e2 * a.jpp + e2 * e * c * 2L * a.jp, bits));
        EXPECT_TRUE(close(b.f, a.f / e2, bits));
        EXPECT_TRUE(close(b.e2star, e2 * a.e2star, bits));
        EXPECT_TRUE(close(b.chistar, a.chistar, bits));
    }
}

TEST(Evaluator, Periodicity)
{
    HPComplex t = cx(0.21, 1.05);
    HPComplex t1 = t + Real(1L, working_prec(prec));
    JValues a = eval_J(t, prec), b = eval_J(t1, prec);
    EXPECT_TRUE(close(a.j, b.j, 240));
    EXPECT_TRUE(close(a.jp, b.jp, 240));
    EXPECT_TRUE(close(a.jpp, b.jpp, 240));
}

TEST(Evaluator, FiniteDifferenceGradient)
{
    const int p = 128;
    HPComplex t = HPComplex::from_double(0.17, 1.2, working_prec(p)).tagged(p);
    Real h = Real::pow2(-20, working_prec(p));
    HPComplex hp(h, Real(working_prec(p)));
    JValues plus = eval_J(t + hp, p), minus = eval_J(t - hp, p), mid = eval_J(t, p);
    HPComplex d1 = (plus.j - minus.j) / (h * 2L);
    HPComplex d2 = (plus.jp - minus.jp) / (h * 2L);
    // central differences: error O(h^2) = 2^-40
    EXPECT_TRUE(close(d1, mid.jp, 30));
    EXPECT_TRUE(close(d2, mid.jpp, 30));
}

TEST(Evaluator, AuxValues)
{
    HPComplex t = cx(0.1, 10);
    AuxValues a = eval_aux(t, prec);
    const mpfr_prec_t p = working_prec(prec);
    HPComplex e2 = eval_qseries(eisenstein(2, 10), t, prec).value;
    HPComplex expect = e2 - Real(3L, p) / (Real::pi(p) * Real(10L, p));
    EXPECT_TRUE(close(a.e2star, expect, 240));
    HPComplex decomp = a.chi - a.f * (Real(3L, p) / (Real::pi(p) * t.im));
    EXPECT_TRUE(close(a.chistar, decomp, 250));
}

TEST(Evaluator, MgExamples)
{
    HPComplex t = cx(0.3, 1.1);
    EXPECT_TRUE(close(m_g(Mat2Z(2, 0, 0, 1), t), HPComplex(Real(1L, 320) / 2), 250));
    EXPECT_TRUE(close(m_g(Mat2Z(0, -1, 1, 0), t), t * t, 250));
    EXPECT_TRUE(close(m_g(Mat2Z(), t), HPComplex::from_long(1, 320), 250));
}
