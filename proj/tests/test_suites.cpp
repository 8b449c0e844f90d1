#include <gtest/gtest.h>

#include "jderiv/suites.hpp"

using namespace jderiv;

TEST(Suites, RecordFormat)
{
    SuiteRecord r{"masser", hex_digest("x"), -200.123, true};
    EXPECT_EQ(r.line(), "masser " + hex_digest("x") + " -200.12 PASS");
    SuiteRecord z{"phi_dual_run", "0000000000000000", -INFINITY, false};
    EXPECT_EQ(z.line(), "phi_dual_run 0000000000000000 -inf FAIL");
    EXPECT_EQ(hex_digest(""), "cbf29ce484222325");
}

TEST(Suites, ClassNumberOracles)
{
    for (long d : {-3L, -4L, -12L, -16L, -27L, -28L, -75L, -99L, -400L, -1092L}) {
        EXPECT_EQ(detail::analytic_class_number(d), class_number(d)) << d;
        EXPECT_EQ(detail::enumerated_class_number(d), class_number(d)) << d;
    }
}

TEST(Suites, DeterministicText)
{
    std::string a = suite_masser(3, 128, 8).text(), b = suite_masser(3, 128, 8).text();
    EXPECT_EQ(a, b);
    EXPECT_NE(a, suite_masser(4, 128, 8).text());
    EXPECT_NE(a.find("8/8 PASS"), std::string::npos);
}

TEST(Suites, UnknownSuite)
{
    EXPECT_THROW(run_suite("nope", 1, 128), DomainError);
}
