#include <gtest/gtest.h>

#include "jderiv/cmfields.hpp"
#include "jderiv/evaluator.hpp"
#include "jderiv/recognize.hpp"

using namespace jderiv;

TEST(Recognize, Trivial)
{
    RecognitionResult r = minimal_polynomial(HPComplex::from_long(1728, 320).tagged(256), 2, mpz_class(1000000), 256);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.poly, (IntPoly{-1728, 1}));
    ValueSource sqrt2 = [](int p) { return HPComplex(sqrt(Real(2L, working_prec(p))), Real(working_prec(p)), p); };
    r = minimal_polynomial(sqrt2, 2, mpz_class(1000), 256);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.poly, (IntPoly{-2, 0, 1}));
    EXPECT_EQ(r.verify_prec_bits, 384);
    r = minimal_polynomial(HPComplex::from_long(0, 128).tagged(64), 1, mpz_class(10), 64);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.poly, (IntPoly{0, 1}));
    EXPECT_THROW(minimal_polynomial(sqrt2, 8, mpz_class(10), 128), PrecisionError);
}

TEST(Recognize, GaussianAndComplex)
{
    // i: X^2 + 1; (1 + sqrt(-7))/2: X^2 - X + 2
    ValueSource iv = [](int p) { return HPComplex(Real(working_prec(p)), Real(1L, working_prec(p)), p); };
    RecognitionResult r = minimal_polynomial(iv, 4, mpz_class(100), 256);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.poly, (IntPoly{1, 0, 1}));
    ValueSource w = [](int p) { return qpoint(1, -1, 2).value(p); };
    r = minimal_polynomial(w, 4, mpz_class(100), 256);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.poly, (IntPoly{2, -1, 1}));
}

TEST(Recognize, SingularModulusDegreeThree)
{
    ValueSource j23 = [](int p) { return eval_J(qpoint(1, 1, 6).value(p), p).j; };
    RecognitionResult r = minimal_polynomial(j23, 3, mpz_class("100000000000000"), 512);
    ASSERT_TRUE(r.found) << r.serialize();
    EXPECT_EQ(r.poly, hilbert_class_poly(-23).coeffs);
    // stable under precision increase
    RecognitionResult r2 = minimal_polynomial(j23, 3, mpz_class("100000000000000"), 1024);
    EXPECT_EQ(r2.poly, r.poly);
}

TEST(Recognize, PiHasNoSmallRelation)
{
    ValueSource pi = [](int p) { return HPComplex(Real::pi(working_prec(p)), Real(working_prec(p)), p); };
    RecognitionResult r = transcendence_evidence(pi, 4, mpz_class(1000000), 256);
    EXPECT_FALSE(r.found);
    ASSERT_EQ(r.searches.size(), 4u);
    for (const DegreeSearch &s : r.searches) {
        EXPECT_GT(s.margin_log2, 0) << s.degree;
    }
    std::string text = r.serialize();
    EXPECT_NE(text.find("found=false"), std::string::npos);
    EXPECT_NE(text.find("height_bound=1000000"), std::string::npos);
}

TEST(Recognize, RationalReconstruct)
{
    const mpfr_prec_t p = 320;
    RationalResult r = rational_reconstruct(Real(1L, p) / Real(3L, p), 256);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.value, mpq_class(1, 3));
    r = rational_reconstruct(Real::pi(p), 256, mpz_class(1000000));
    EXPECT_FALSE(r.found);
    r = rational_reconstruct(Real(std::string("-157464000000000.0"), p), 256);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.value, mpq_class(mpz_class("-157464000000000")));
    r = rational_reconstruct(Real(-22L, p) / Real(7L, p), 128);
    ASSERT_TRUE(r.found);
    EXPECT_EQ(r.value, mpq_class(-22, 7));
}
