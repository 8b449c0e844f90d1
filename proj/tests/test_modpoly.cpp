#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "jderiv/modpoly.hpp"

using namespace jderiv;

namespace
{

constexpr int prec = 256;

HPComplex cx(double re, double im, int p = prec)
{
    return HPComplex::from_double(re, im, working_prec(p)).tagged(p);
}

Real tol(int bits)
{
    return Real::pow2(-bits, 64);
}

} // namespace

TEST(ModPoly, Psi)
{
    EXPECT_EQ(psi(1), 1);
    EXPECT_EQ(psi(2), 3);
    EXPECT_EQ(psi(6), 12);
    EXPECT_EQ(psi(9), 12);
    EXPECT_EQ(psi(10), 18);
}

TEST(ModPoly, CosetReps)
{
    EXPECT_EQ(coset_reps(1), std::vector<Mat2Z>{Mat2Z()});
    EXPECT_EQ(coset_reps(2), (std::vector<Mat2Z>{Mat2Z(1, 0, 0, 2), Mat2Z(1, 1, 0, 2), Mat2Z(2, 0, 0, 1)}));
    for (long n = 1; n <= 30; ++n) {
        std::vector<Mat2Z> reps = coset_reps(n);
        ASSERT_EQ(static_cast<long>(reps.size()), psi(n)) << n;
        for (const Mat2Z &g : reps) {
            EXPECT_EQ(g.det(), n);
            EXPECT_TRUE(g.primitive());
        }
    }
}

TEST(ModPoly, PhiOneAndTwo)
{
    EXPECT_EQ(compute_phi(1), ModularPolynomial::level_one());
    ModularPolynomial p2 = compute_phi(2);
    EXPECT_EQ(p2.coeff(0, 0), mpz_class("-157464000000000"));
    EXPECT_EQ(p2.coeff(1, 0), mpz_class("8748000000"));
    EXPECT_EQ(p2.coeff(1, 1), mpz_class("40773375"));
    EXPECT_EQ(p2.coeff(2, 0), -162000);
    EXPECT_EQ(p2.coeff(2, 1), 1488);
    EXPECT_EQ(p2.coeff(2, 2), -1);
    EXPECT_EQ(p2.coeff(3, 0), 1);
    EXPECT_EQ(p2.n_monomials(), 11u);
    EXPECT_TRUE(p2.symmetric());
    EXPECT_EQ(p2.degree_x(), 3);
}

TEST(ModPoly, IndependentRunsAgree)
{
    SampleConfig other{"sqrt2-1", 1.08, 0.09};
    for (long n : {2L, 3L, 5L, 7L}) {
        PhiAttempt a = compute_phi_attempts(n);
        PhiAttempt b = compute_phi_attempts(n, a.prec_bits + 160, other);
        EXPECT_NE(a.prec_bits, b.prec_bits);
        EXPECT_EQ(a.phi, b.phi) << n;
        EXPECT_EQ(a.phi.degree_x(), psi(n));
    }
}

TEST(ModPoly, ResidualOnAllCosets)
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.9, 2.0);
    for (long n : {3L, 4L, 6L}) {
        const ModularPolynomial &phi = phi_for_level(n);
        for (int k = 0; k < 5; ++k) {
            HPComplex t = cx(re(rng), im(rng));
            HPComplex y = eval_J(t, prec).j;
            for (const Mat2Z &g : coset_reps(n)) {
                HPComplex x = eval_J(g.act(t), prec).j;
                Real r = abs(phi.eval(x, y)) / phi.magnitude(x, y);
                EXPECT_LT(r, tol(prec / 2)) << n << " " << g;
                // transposed orientation for lambda
                Real r2 = abs(phi.eval(y, x)) / phi.magnitude(y, x);
                EXPECT_LT(r2, tol(prec / 2));
            }
        }
    }
    // the named example
    const ModularPolynomial &p3 = phi_for_level(3);
    HPComplex t11(Real(working_prec(prec)), Real(std::string("1.1"), working_prec(prec)), prec);
    HPComplex x = eval_J(Mat2Z(3, 0, 0, 1).act(t11), prec).j, y = eval_J(t11, prec).j;
    EXPECT_LT(abs(p3.eval(x, y)) / p3.magnitude(x, y), tol(prec / 2));
}

TEST(ModPoly, CacheRoundTrip)
{
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "jderiv_test_cache";
    std::filesystem::remove_all(dir);
    PhiCache cache(dir);
    const ModularPolynomial &p = cache.get(3);
    ASSERT_TRUE(std::filesystem::exists(cache.file_for(3)));
    PhiCache again(dir);
    std::optional<ModularPolynomial> loaded = again.load(3);
    ASSERT_TRUE(loaded.has_value());
    EXPECT_EQ(*loaded, p);
    EXPECT_EQ(loaded->serialize(), p.serialize());
    EXPECT_EQ(ModularPolynomial::parse(ModularPolynomial::level_one().serialize()), ModularPolynomial::level_one());
    std::string text = p.serialize();
    EXPECT_EQ(text.rfind("PHI N 3\n", 0), 0u);
    EXPECT_THROW(ModularPolynomial::parse("PHI X 3\n"), DomainError);
    std::filesystem::remove_all(dir);
}

TEST(ModPoly, CacheDirPrecedence)
{
    EXPECT_EQ(resolve_cache_dir("/tmp/x"), std::filesystem::path("/tmp/x"));
    setenv("JDERIV_CACHE", "/tmp/envcache", 1);
    EXPECT_EQ(resolve_cache_dir(), std::filesystem::path("/tmp/envcache"));
    unsetenv("JDERIV_CACHE");
    EXPECT_EQ(resolve_cache_dir(), std::filesystem::path("cache"));
}

TEST(ModPoly, LevelBound)
{
    EXPECT_THROW(compute_phi(21), DomainError);
    EXPECT_THROW(compute_phi(0), DomainError);
}

TEST(ModPoly, Lambda)
{
    HPComplex x = cx(3, 4), y = cx(-2, 7);
    HPComplex l = lambda_eval(1, x, y);
    EXPECT_NEAR(l.re.to_double(), -1.0, 0);
    EXPECT_NEAR(l.im.to_double(), 0.0, 0);

    // Ramification: Phi_2(1728, Y) has a double root at j(2i) = j(i/2) = 287496.
    EXPECT_THROW(lambda_eval(2, HPComplex::from_long(1728, 320), HPComplex::from_long(287496, 320)),
                 RamificationError);
    // Slightly off the ramified point it is finite but large.
    HPComplex t = cx(0.02, 1.0);
    HPComplex jt = eval_J(t, prec).j, j2t = eval_J(cx(0.04, 2.0), prec).j;
    EXPECT_NO_THROW(lambda_eval(2, jt, j2t));
}

TEST(ModPoly, MuLevelOne)
{
    HPComplex t = cx(0.3, 1.3);
    HPComplex m = mu_eval(1, Mat2Z(), t, prec);
    EXPECT_LT(relative_residual(m, eval_J(t, prec).jpp), tol(prec / 2));
}

TEST(ModPoly, MuAgainstDirectEvaluation)
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.9, 2.0);
    HPComplex t = cx(0.2, 1.4);
    HPComplex direct = eval_J(Mat2Z(2, 0, 0, 1).act(t), prec).jpp;
    EXPECT_LT(relative_residual(mu_eval(2, Mat2Z(2, 0, 0, 1), t, prec), direct), tol(prec / 2));
    for (long n : {2L, 3L, 5L}) {
        for (const Mat2Z &g0 : coset_reps(n)) {
            // include c != 0 by left-multiplying with an SL2(Z) element
            for (const Mat2Z &g : {g0, Mat2Z(1, 0, 1, 1) * g0, Mat2Z(2, 1, 3, 2) * g0}) {
                HPComplex tau = cx(re(rng), im(rng));
                HPComplex want = eval_J(g.act(tau), prec).jpp;
                EXPECT_LT(relative_residual(mu_eval(n, g, tau, prec), want), tol(prec / 2)) << g;
            }
        }
    }
}

TEST(ModPoly, MuAffineInC)
{
    const ModularPolynomial &phi = phi_for_level(2);
    HPComplex t = cx(0.1, 1.2);
    JValues a = eval_J(t, prec), b = eval_J(Mat2Z(1, 0, 1, 2).act(t), prec);
    HPComplex e = Mat2Z(1, 0, 1, 2).cofactor(t);
    auto at = [&](long c) { return mu_n(phi, a.j, b.j, a.jp, b.jp, a.jpp, Real(c, working_prec(prec)), e); };
    HPComplex m0 = at(0), m1 = at(1), m3 = at(3);
    HPComplex defect = (m3 - m0) - (m1 - m0) * 3L;
    EXPECT_LT((abs(defect) / max(abs(m3), Real(1L, 64))), tol(200));
}
