#include <gtest/gtest.h>

#include <numeric>

#include "jderiv/cmfields.hpp"

using namespace jderiv;

namespace
{

// Textbook count: all (a, b, c) with b^2 - 4ac = D, |b| <= a <= c, b >= 0 on the
// boundary, primitive; searched over a box bounded only by |D|.
long brute_force_class_number(long d)
{
    long count = 0;
    long n = -d;
    for (long a = 1; a <= n; ++a) {
        for (long b = -a; b <= a; ++b) {
            long num = b * b - d;
            if (num % (4 * a) != 0) {
                continue;
            }
            long c = num / (4 * a);
            if (c < a) {
                continue;
            }
            if ((b < 0) && (-b == a || a == c)) {
                continue;
            }
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) {
                continue;
            }
            ++count;
        }
    }
    return count;
}

bool fundamental(long d)
{
    long n = -d;
    if (d % 4 == -1 || d % 4 == 3) {
        for (long p = 2; p * p <= n; ++p) {
            if (n % (p * p) == 0) {
                return false;
            }
        }
        return true;
    }
    if (n % 4 != 0) {
        return false;
    }
    long m = n / 4;
    if (m % 4 != 1 && m % 4 != 2) {
        return false;
    }
    for (long p = 2; p * p <= m; ++p) {
        if (m % (p * p) == 0) {
            return false;
        }
    }
    return true;
}

// Dirichlet: h(D) = -(w / (2|D|)) sum_{a=1}^{|D|} (D/a) a for fundamental D < 0.
long dirichlet_class_number(long d)
{
    long w = d == -3 ? 6 : (d == -4 ? 4 : 2);
    mpz_class s = 0;
    for (long a = 1; a < -d; ++a) {
        s += mpz_kronecker_si(mpz_class(d).get_mpz_t(), a) * a;
    }
    mpz_class h = -mpz_class(w) * s / (2 * -d);
    return h.get_si();
}

} // namespace

TEST(CMFields, QPoint)
{
    QuadraticPoint i = qpoint(1, 0, 1);
    EXPECT_EQ(i.D, -4);
    EXPECT_NEAR(i.value(64).im.to_double(), 1.0, 1e-15);
    QuadraticPoint rho = qpoint(1, 1, 1);
    EXPECT_EQ(rho.D, -3);
    EXPECT_NEAR(rho.value(64).re.to_double(), -0.5, 1e-15);
    EXPECT_EQ(qpoint(1, 0, 4).D, -16);
    EXPECT_THROW(qpoint(0, 1, 1), DomainError);
    EXPECT_THROW(qpoint(1, 3, 1), DomainError);
    EXPECT_THROW(qpoint(2, 2, 2), DomainError);
}

TEST(CMFields, ReducedFormsExamples)
{
    EXPECT_EQ(reduced_forms(-4), (std::vector<BinaryForm>{{1, 0, 1}}));
    EXPECT_EQ(reduced_forms(-23), (std::vector<BinaryForm>{{1, 1, 6}, {2, 1, 3}, {2, -1, 3}}));
    EXPECT_EQ(reduced_forms(-163), (std::vector<BinaryForm>{{1, 1, 41}}));
    EXPECT_THROW(reduced_forms(-5), DomainError);
    EXPECT_THROW(reduced_forms(4), DomainError);
}

TEST(CMFields, ClassNumbersMatchBruteForce)
{
    for (long d = -3; d >= -2000; --d) {
        if (!detail::valid_discriminant(d)) {
            continue;
        }
        long h = class_number(d);
        ASSERT_EQ(h, brute_force_class_number(d)) << d;
        if (fundamental(d)) {
            ASSERT_EQ(h, dirichlet_class_number(d)) << d;
        }
    }
}

TEST(CMFields, HeegnerPointsInFundamentalDomain)
{
    for (long d : {-3L, -4L, -23L, -71L, -420L, -1999L}) {
        for (const QuadraticPoint &t : heegner_points(d)) {
            HPComplex z = t.value(128);
            EXPECT_LE(std::fabs(z.re.to_double()), 0.5);
            EXPECT_GE(norm(z).to_double(), 1.0 - 1e-30);
        }
    }
}

TEST(CMFields, ClassPolynomials)
{
    ClassPolynomial p4 = hilbert_class_poly(-4, 512);
    EXPECT_EQ(p4.coeffs, (std::vector<mpz_class>{-1728, 1}));
    EXPECT_LT(p4.max_residual, 1e-10);
    ClassPolynomial p163 = hilbert_class_poly(-163, 512);
    EXPECT_EQ(p163.coeffs, (std::vector<mpz_class>{mpz_class("262537412640768000"), 1}));
    ClassPolynomial p23 = hilbert_class_poly(-23, 512);
    EXPECT_EQ(p23.degree(), 3);
    EXPECT_EQ(p23.coeffs, (std::vector<mpz_class>{mpz_class("12771880859375"), mpz_class("-5151296875"),
                                                  mpz_class("3491750"), 1}));
    // independent precision
    EXPECT_EQ(hilbert_class_poly(-23, 1024).coeffs, p23.coeffs);
    EXPECT_EQ(hilbert_class_poly(-3, 256).coeffs, (std::vector<mpz_class>{0, 1}));
    for (long d : {-15L, -20L, -35L, -56L, -84L, -199L}) {
        EXPECT_EQ(hilbert_class_poly(d).degree(), class_number(d)) << d;
    }
    EXPECT_EQ(p4.to_string(), "X - 1728");
}

TEST(CMFields, SameOrbit)
{
    QuadraticPoint i = qpoint(1, 0, 1), i2 = qpoint(1, 0, 4), rho = qpoint(1, 1, 1);
    EXPECT_TRUE(same_gl2q_orbit(i, i2));
    EXPECT_FALSE(same_gl2q_orbit(i, rho));
    EXPECT_TRUE(same_gl2q_orbit(qpoint(1, 0, 2), qpoint(1, 2, 3)));
}

TEST(CMFields, DecomposeExamples)
{
    QuadraticPoint i = qpoint(1, 0, 1), i2 = qpoint(1, 0, 4), rho = qpoint(1, 1, 1), ip1 = qpoint(1, -2, 2);
    SpecialDecomposition s = decompose_tuple({i, i2, rho});
    ASSERT_EQ(s.blocks.size(), 2u);
    EXPECT_EQ(s.blocks[0].indices, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(s.blocks[0].matrices[0], Mat2Z(2, 0, 0, 1));
    EXPECT_EQ(s.blocks[0].dets[0], 2);
    EXPECT_EQ(s.blocks[1].indices, (std::vector<std::size_t>{2}));
    s = decompose_tuple({i});
    ASSERT_EQ(s.blocks.size(), 1u);
    EXPECT_TRUE(s.blocks[0].matrices.empty());
    s = decompose_tuple({i, ip1});
    ASSERT_EQ(s.blocks.size(), 1u);
    EXPECT_EQ(s.blocks[0].matrices[0], Mat2Z(1, 1, 0, 1));
    EXPECT_EQ(s.blocks[0].dets[0], 1);
    EXPECT_EQ(tuple_discriminant({i, i2, rho}), -16);
}

TEST(CMFields, DecomposeReconstructsExactly)
{
    std::vector<QuadraticPoint> pts;
    for (long a = 1; a <= 6; ++a) {
        for (long b = -7; b <= 7; ++b) {
            for (long c = 1; c <= 9; ++c) {
                if (b * b - 4 * a * c < 0 && std::gcd(std::gcd(a, std::labs(b)), c) == 1) {
                    pts.push_back(qpoint(a, b, c));
                }
            }
        }
    }
    SpecialDecomposition s = decompose_tuple(pts);
    std::size_t covered = 0;
    for (const OrbitBlock &b : s.blocks) {
        covered += b.indices.size();
        EXPECT_EQ(pts[b.indices[0]], b.base);
        for (std::size_t k = 0; k < b.matrices.size(); ++k) {
            EXPECT_TRUE(b.matrices[k].primitive());
            EXPECT_TRUE(b.matrices[k].upper_triangular());
            EXPECT_EQ(transform_point(b.matrices[k], b.base), pts[b.indices[k + 1]]);
        }
    }
    EXPECT_EQ(covered, pts.size());
    for (std::size_t x = 0; x < s.blocks.size(); ++x) {
        for (std::size_t y = x + 1; y < s.blocks.size(); ++y) {
            EXPECT_FALSE(same_gl2q_orbit(s.blocks[x].base, s.blocks[y].base));
        }
    }
}

TEST(CMFields, SiegelTable)
{
    std::vector<SiegelRow> rows = siegel_table({-4, -20, -84, -420, -1092});
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[0].h, 1);
    EXPECT_EQ(rows[1].h, 2);
    EXPECT_EQ(rows[2].h, 4);
    EXPECT_EQ(rows[3].h, 8);
    EXPECT_EQ(rows[4].h, 8);
}
