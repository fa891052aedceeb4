#include <gtest/gtest.h>

#include "hkreal/polynomial.hpp"
#include "support/test_support.hpp"

using namespace hkreal;
using hktest::Rng;

namespace {

// little-endian coefficients of prod (x - r_i), an oracle built by hand
IntPoly poly_from_roots(const std::vector<long>& roots) {
    IntPoly p{1};
    for (long r : roots) p = poly_mul(p, IntPoly{Int(-r), Int(1)});
    return p;
}

} // namespace

TEST(PolyArithmetic, Basics) {
    IntPoly a{1, 2, 3}; // 3x^2 + 2x + 1
    IntPoly b{0, 1};    // x
    EXPECT_EQ(poly_mul(a, b), (IntPoly{0, 1, 2, 3}));
    EXPECT_EQ(poly_add(a, b), (IntPoly{1, 3, 3}));
    EXPECT_EQ(poly_sub(a, a), IntPoly{});
    EXPECT_EQ(poly_derivative(a), (IntPoly{2, 6}));
    EXPECT_EQ(poly_eval(a, Int(2)), 17);
    EXPECT_EQ(poly_eval(a, Rat(1, 2)), Rat(11, 4));
    EXPECT_EQ(poly_degree(IntPoly{}), -1);
}

TEST(PolyDivision, ExactAndInexact) {
    IntPoly num = poly_mul(IntPoly{-1, 1}, IntPoly{2, 1}); // (x-1)(x+2)
    auto q = poly_divide_exact(num, IntPoly{-1, 1});
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, (IntPoly{2, 1}));
    EXPECT_FALSE(poly_divide_exact(IntPoly{1, 0, 1}, IntPoly{-1, 1}).has_value());
    EXPECT_FALSE(poly_divide_exact(IntPoly{1, 1}, IntPoly{0, 2}).has_value());
}

TEST(PolyGcd, PrimitivePart) {
    IntPoly a = poly_mul(IntPoly{-1, 1}, IntPoly{1, 1}); // x^2 - 1
    IntPoly b = poly_mul(IntPoly{1, 1}, IntPoly{1, 1});  // (x+1)^2
    EXPECT_EQ(poly_gcd(a, b), (IntPoly{1, 1}));
    EXPECT_EQ(poly_gcd(IntPoly{4}, IntPoly{6}), IntPoly{2});
    // gcd of coprime polys is 1
    EXPECT_EQ(poly_gcd(IntPoly{-1, 1}, IntPoly{1, 1}), IntPoly{1});
}

TEST(PolyContent, GaussPrimitive) {
    EXPECT_EQ(poly_content(IntPoly{4, 6, 8}), 2);
    EXPECT_EQ(poly_primitive(IntPoly{-4, -6}), (IntPoly{2, 3}));
    Rng rng(31001);
    for (int t = 0; t < 20; ++t) {
        IntPoly a, b;
        for (int i = 0; i <= 3; ++i) a.push_back(hktest::rand_int(rng, -9, 9));
        for (int i = 0; i <= 2; ++i) b.push_back(hktest::rand_int(rng, -9, 9));
        poly_trim(a);
        poly_trim(b);
        if (a.empty() || b.empty()) continue;
        EXPECT_EQ(poly_content(poly_mul(a, b)), poly_content(a) * poly_content(b));
    }
}

TEST(Squarefree, YunDecomposition) {
    // (x-1)^2 (x+2)
    IntPoly p = poly_mul(poly_mul(IntPoly{-1, 1}, IntPoly{-1, 1}), IntPoly{2, 1});
    auto parts = poly_squarefree(p);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(parts[0].first, (IntPoly{2, 1}));
    EXPECT_EQ(parts[0].second, 1);
    EXPECT_EQ(parts[1].first, (IntPoly{-1, 1}));
    EXPECT_EQ(parts[1].second, 2);
}

TEST(Squarefree, ProductReconstructs) {
    Rng rng(31002);
    for (int t = 0; t < 25; ++t) {
        // build p as a product of small factors with multiplicities
        IntPoly p{1};
        for (int f = 0; f < 3; ++f) {
            IntPoly factor{hktest::rand_int(rng, -4, 4), Int(1)};
            int mult = 1 + static_cast<int>(t + f) % 3;
            for (int m = 0; m < mult; ++m) p = poly_mul(p, factor);
        }
        auto parts = poly_squarefree(p);
        IntPoly prod{1};
        for (const auto& [factor, mult] : parts) {
            for (int m = 0; m < mult; ++m) prod = poly_mul(prod, factor);
            // each factor squarefree: gcd with derivative is constant
            EXPECT_LE(poly_degree(poly_gcd(factor, poly_derivative(factor))), 0);
        }
        EXPECT_EQ(prod, poly_primitive(p));
    }
}

TEST(SturmRootSigns, SpecExamples) {
    EXPECT_EQ(sturm_root_signs(IntPoly{0, 0, 1}), std::make_tuple(0, 0, 1));  // x^2
    EXPECT_EQ(sturm_root_signs(IntPoly{-2, 0, 1}), std::make_tuple(1, 1, 0)); // x^2 - 2
    EXPECT_EQ(sturm_root_signs(poly_from_roots({1, 2, -3})), std::make_tuple(2, 1, 0));
    EXPECT_EQ(sturm_root_signs(IntPoly{0, 0, 0, 1}), std::make_tuple(0, 0, 1)); // x^3
    RatPoly halves{Rat(-1, 6), Rat(1, 6), Rat(1)}; // (x - 1/2)(x + 1/3) scaled
    EXPECT_EQ(sturm_root_signs(halves), std::make_tuple(1, 1, 0));
}

TEST(SturmRootSigns, DistinctRootSemantics) {
    // multiplicities collapse: (x-1)^2 (x-2) has two distinct positive roots
    IntPoly p = poly_mul(poly_mul(IntPoly{-1, 1}, IntPoly{-1, 1}), IntPoly{-2, 1});
    EXPECT_EQ(sturm_root_signs(p), std::make_tuple(2, 0, 0));
    // x^2 (x+5): one distinct negative root, zero root present
    IntPoly q = poly_mul(IntPoly{0, 0, 1}, IntPoly{5, 1});
    EXPECT_EQ(sturm_root_signs(q), std::make_tuple(0, 1, 1));
}

TEST(SturmRootSigns, RandomizedAgainstKnownRoots) {
    Rng rng(31003);
    for (int t = 0; t < 50; ++t) {
        std::vector<long> roots;
        int k = 1 + t % 4;
        for (int i = 0; i < k; ++i)
            roots.push_back(mpz_get_si(hktest::rand_int(rng, -6, 6).get_mpz_t()));
        IntPoly p = poly_from_roots(roots);
        std::vector<long> distinct = roots;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        int pos = 0, neg = 0, zero = 0;
        for (long r : distinct) (r > 0 ? pos : r < 0 ? neg : zero)++;
        EXPECT_EQ(sturm_root_signs(p), std::make_tuple(pos, neg, zero));
    }
}

TEST(IsolateRoots, DisjointAndComplete) {
    IntPoly p = poly_from_roots({-3, 1, 2});
    auto chain = sturm_chain(p);
    Rat bound = poly_root_bound(p);
    auto intervals = isolate_roots(p, -bound, bound, Rat(1, 4));
    ASSERT_EQ(intervals.size(), 3u);
    std::vector<long> expected{-3, 1, 2};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(sturm_count_interval(chain, intervals[i].first, intervals[i].second), 1);
        EXPECT_LT(intervals[i].first, Rat(expected[i]));
        EXPECT_LE(Rat(expected[i]), intervals[i].second);
        if (i > 0) EXPECT_LE(intervals[i - 1].second, intervals[i].first);
    }
}

TEST(PositiveRadicalFactor, RationalCases) {
    {
        // (x-1)(x-4)(x+2) -> (x-1)(x-4)
        auto f = positive_radical_factor(poly_from_roots({1, 4, -2}));
        ASSERT_TRUE(f.has_value());
        EXPECT_EQ(*f, poly_from_roots({1, 4}));
    }
    {
        // multiplicity drops out: (x-2)^2 (x+1) -> x-2
        auto f = positive_radical_factor(poly_from_roots({2, 2, -1}));
        ASSERT_TRUE(f.has_value());
        EXPECT_EQ(*f, (IntPoly{-2, 1}));
    }
    {
        // no positive roots -> constant 1
        auto f = positive_radical_factor(poly_from_roots({-1, -3, 0}));
        ASSERT_TRUE(f.has_value());
        EXPECT_EQ(*f, IntPoly{1});
    }
}

TEST(PositiveRadicalFactor, IrrationalCases) {
    {
        // all roots of x^2 - 4x + 1 are positive: the whole factor survives
        auto f = positive_radical_factor(IntPoly{1, -4, 1});
        ASSERT_TRUE(f.has_value());
        EXPECT_EQ(*f, (IntPoly{1, -4, 1}));
    }
    {
        // x^2 - 2 splits one positive, one negative irrational root: the
        // positive part is not a rational polynomial
        auto f = positive_radical_factor(IntPoly{-2, 0, 1});
        EXPECT_FALSE(f.has_value());
    }
    {
        // mixed: (x^2 - 3)(x - 1) likewise fails on the x^2 - 3 part
        auto f = positive_radical_factor(poly_mul(IntPoly{-3, 0, 1}, IntPoly{-1, 1}));
        EXPECT_FALSE(f.has_value());
    }
    {
        // (x^2 - 4x + 1)(x + 2)(x - 3): rational and irrational positive
        // parts combine
        IntPoly p = poly_mul(poly_mul(IntPoly{1, -4, 1}, IntPoly{2, 1}), IntPoly{-3, 1});
        auto f = positive_radical_factor(p);
        ASSERT_TRUE(f.has_value());
        EXPECT_EQ(*f, poly_mul(IntPoly{1, -4, 1}, IntPoly{-3, 1}));
    }
}

TEST(PositiveRadicalFactor, EvaluatesPositivelyOnRoots) {
    Rng rng(31004);
    for (int t = 0; t < 30; ++t) {
        std::vector<long> roots;
        for (int i = 0; i < 1 + t % 4; ++i)
            roots.push_back(mpz_get_si(hktest::rand_int(rng, -7, 7).get_mpz_t()));
        IntPoly p = poly_from_roots(roots);
        auto f = positive_radical_factor(p);
        ASSERT_TRUE(f.has_value());
        std::vector<long> pos_distinct;
        for (long r : roots)
            if (r > 0) pos_distinct.push_back(r);
        std::sort(pos_distinct.begin(), pos_distinct.end());
        pos_distinct.erase(std::unique(pos_distinct.begin(), pos_distinct.end()),
                           pos_distinct.end());
        EXPECT_EQ(poly_degree(*f), static_cast<int>(pos_distinct.size()));
        for (long r : pos_distinct) EXPECT_EQ(poly_eval(*f, Int(r)), 0);
    }
}
