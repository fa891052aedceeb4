#include <gtest/gtest.h>

#include "hkreal/lattice.hpp"
#include "support/test_support.hpp"

using namespace hkreal;
using hktest::Rng;

namespace {

IntVec unit(std::size_t n, std::size_t i) {
    IntVec v(n);
    v[i] = 1;
    return v;
}

} // namespace

TEST(Constructors, HyperbolicPlane) {
    Lattice u = lattice_U();
    EXPECT_EQ(u.rank(), 2u);
    EXPECT_EQ(u.gram, (IntMatrix{{0, 1}, {1, 0}}));
    EXPECT_EQ(det(u.gram), -1);
}

TEST(Constructors, E8MinusFrozenGram) {
    // the fixed basis contract: byte-stable Gram in the simple-root basis
    IntMatrix expected{
        {-2, 0, 1, 0, 0, 0, 0, 0},
        {0, -2, 0, 1, 0, 0, 0, 0},
        {1, 0, -2, 1, 0, 0, 0, 0},
        {0, 1, 1, -2, 1, 0, 0, 0},
        {0, 0, 0, 1, -2, 1, 0, 0},
        {0, 0, 0, 0, 1, -2, 1, 0},
        {0, 0, 0, 0, 0, 1, -2, 1},
        {0, 0, 0, 0, 0, 0, 1, -2},
    };
    Lattice e8 = lattice_E8_minus();
    EXPECT_EQ(e8.gram, expected);
    EXPECT_EQ(det(e8.gram), 1);
    EXPECT_EQ(symmetric_signature(e8.gram), std::make_tuple(0ul, 8ul, 0ul));
    // even: all diagonal entries are -2
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(e8.gram(i, i), -2);
}

TEST(Constructors, A2MinusAndRank1) {
    EXPECT_EQ(lattice_A2_minus().gram, (IntMatrix{{-2, 1}, {1, -2}}));
    EXPECT_EQ(lattice_rank1(Int(-4)).gram, (IntMatrix{{-4}}));
    EXPECT_THROW(lattice_rank1(Int(0)), ValidationError);
}

TEST(Constructors, BbfLattices) {
    Lattice k3 = lattice_k3();
    EXPECT_EQ(k3.rank(), 22u);
    EXPECT_EQ(det(k3.gram), -1);
    EXPECT_EQ(symmetric_signature(k3.gram), std::make_tuple(3ul, 19ul, 0ul));

    Lattice h2 = lattice_k3n(2);
    EXPECT_EQ(h2.rank(), 23u);
    EXPECT_EQ(h2.gram(22, 22), -2); // exceptional class is the last basis vector
    for (std::size_t j = 0; j < 22; ++j) EXPECT_EQ(h2.gram(22, j), 0);
    EXPECT_EQ(symmetric_signature(h2.gram), std::make_tuple(3ul, 20ul, 0ul));

    Lattice h3 = lattice_k3n(3);
    EXPECT_EQ(h3.gram(22, 22), -4);
    EXPECT_THROW(lattice_k3n(1), ValidationError);

    Lattice og = lattice_og10();
    EXPECT_EQ(og.rank(), 24u);
    EXPECT_EQ(symmetric_signature(og.gram), std::make_tuple(3ul, 21ul, 0ul));
    // trailing A2(-1) block
    EXPECT_EQ(og.gram(22, 22), -2);
    EXPECT_EQ(og.gram(22, 23), 1);
    EXPECT_EQ(og.gram(23, 23), -2);
}

TEST(Constructors, DirectSumAndValidation) {
    Lattice s = direct_sum(lattice_U(), lattice_rank1(Int(-2)));
    EXPECT_EQ(s.rank(), 3u);
    EXPECT_EQ(s.gram, (IntMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, -2}}));
    EXPECT_THROW(make_lattice(IntMatrix{{0, 1}, {2, 0}}, "bad"), ValidationError);
}

TEST(PairingNorm, HyperbolicExamples) {
    Lattice u = lattice_U();
    IntVec e = unit(2, 0), f = unit(2, 1);
    EXPECT_EQ(pairing(u, e, f), 1);
    EXPECT_EQ(norm(u, e), 0);
    IntVec both{1, 1};
    EXPECT_EQ(norm(u, both), 2);
    IntVec diff{1, -1};
    EXPECT_EQ(norm(u, diff), -2);
    EXPECT_THROW(norm(u, IntVec{1}), ValidationError);
}

TEST(Sublattices, ConstructionAndInducedGram) {
    Lattice u = lattice_U();
    Sublattice s = make_sublattice(u, IntMatrix{{1, -1}});
    EXPECT_EQ(s.rank(), 1u);
    EXPECT_EQ(s.gram, (IntMatrix{{-2}}));
    EXPECT_THROW(make_sublattice(u, IntMatrix{{1}}), ValidationError);
    EXPECT_THROW(make_sublattice(u, (IntMatrix{{1, 0}, {2, 0}})), ValidationError);
    EXPECT_EQ(zero_sublattice(u).rank(), 0u);
    EXPECT_EQ(full_sublattice(u).gram, u.gram);
}

TEST(OrthogonalComplement, HyperbolicCases) {
    Lattice u = lattice_U();
    // e is isotropic: e^perp contains e itself
    Sublattice e_line = make_sublattice(u, IntMatrix{{1, 0}});
    Sublattice e_perp = orthogonal_complement(u, e_line);
    EXPECT_EQ(e_perp.basis, (IntMatrix{{1, 0}}));
    // (e-f)^perp = span(e+f)
    Sublattice d = make_sublattice(u, IntMatrix{{1, -1}});
    EXPECT_EQ(orthogonal_complement(u, d).basis, (IntMatrix{{1, 1}}));
    // complement of nothing is everything
    EXPECT_EQ(orthogonal_complement(u, zero_sublattice(u)).rank(), 2u);
}

TEST(OrthogonalComplement, RankAndOrthogonality) {
    Lattice k3 = lattice_k3();
    Sublattice first_u = make_sublattice(
        k3, IntMatrix::from_rows({unit(22, 0), unit(22, 1)}, 22));
    Sublattice perp = orthogonal_complement(k3, first_u);
    EXPECT_EQ(perp.rank(), 20u);
    for (std::size_t i = 0; i < perp.rank(); ++i) {
        EXPECT_EQ(pairing(k3, perp.basis.row(i), unit(22, 0)), 0);
        EXPECT_EQ(pairing(k3, perp.basis.row(i), unit(22, 1)), 0);
    }
    // double complement returns the original primitive sublattice
    Sublattice back = orthogonal_complement(k3, perp);
    EXPECT_TRUE(hktest::same_row_span(back.basis, first_u.basis));
}

TEST(OrthogonalComplement, RandomizedDoubleComplement) {
    Rng rng(41001);
    Lattice amb = direct_sum(direct_sum(lattice_U(), lattice_U()), lattice_rank1(Int(-2)));
    for (int t = 0; t < 20; ++t) {
        IntMatrix m = hktest::random_matrix(rng, 2, 5, 4);
        if (rank(m) != 2) continue;
        Sublattice s = make_sublattice(amb, saturate(m, 5));
        Sublattice dd = orthogonal_complement(amb, orthogonal_complement(amb, s));
        EXPECT_TRUE(hktest::same_row_span(dd.basis, s.basis));
    }
}

TEST(Divisibility, ExceptionalClassOfHilbSquare) {
    Lattice h2 = lattice_k3n(2);
    EXPECT_EQ(divisibility(h2, unit(23, 22)), 2);
    EXPECT_EQ(divisibility(h2, unit(23, 0)), 1);
    Lattice h3 = lattice_k3n(3);
    EXPECT_EQ(divisibility(h3, unit(23, 22)), 4);
    // 2 e_1 + delta pairs to even values but is primitive
    IntVec v(23);
    v[0] = 2;
    v[22] = 1;
    EXPECT_EQ(divisibility(h3, v), 2);
    EXPECT_TRUE(is_primitive(h3, v));
}

TEST(Divisibility, DegenerateDirectionRejected) {
    Lattice degen = make_lattice(IntMatrix{{0, 0}, {0, 2}}, "degenerate");
    EXPECT_THROW(divisibility(degen, IntVec{1, 0}), ValidationError);
    EXPECT_EQ(divisibility(degen, IntVec{0, 1}), 2);
}

TEST(Primitivity, ContentOfCoordinates) {
    Lattice u = lattice_U();
    EXPECT_TRUE(is_primitive(u, IntVec{1, 1}));
    EXPECT_TRUE(is_primitive(u, IntVec{2, 3}));
    EXPECT_FALSE(is_primitive(u, IntVec{2, 4}));
    EXPECT_FALSE(is_primitive(u, IntVec{0, 0}));
}

TEST(DiscriminantGroups, KnownOrders) {
    EXPECT_TRUE(discriminant_group(lattice_k3()).trivial());
    EXPECT_TRUE(discriminant_group(lattice_E8_minus()).trivial());
    auto h2 = discriminant_group(lattice_k3n(2));
    ASSERT_EQ(h2.invariant_factors.size(), 1u);
    EXPECT_EQ(h2.invariant_factors[0], 2);
    EXPECT_EQ(h2.order(), 2);
    auto og = discriminant_group(lattice_og10());
    ASSERT_EQ(og.invariant_factors.size(), 1u); // cyclic of order 3
    EXPECT_EQ(og.invariant_factors[0], 3);
    auto a2 = discriminant_group(lattice_A2_minus());
    ASSERT_EQ(a2.invariant_factors.size(), 1u);
    EXPECT_EQ(a2.invariant_factors[0], 3);
    auto r4 = discriminant_group(lattice_rank1(Int(-4)));
    ASSERT_EQ(r4.invariant_factors.size(), 1u);
    EXPECT_EQ(r4.invariant_factors[0], 4);
    Lattice degen = make_lattice(IntMatrix{{0, 0}, {0, 2}}, "degenerate");
    EXPECT_THROW(discriminant_group(degen), ValidationError);
}

TEST(DualCoordinates, SolvesGramSystem) {
    Lattice h2 = lattice_k3n(2);
    RatVec delta(23);
    delta[22] = 1;
    RatVec w = dual_coordinates(h2, delta);
    EXPECT_EQ(w[22], Rat(-1, 2));
    for (std::size_t i = 0; i < 22; ++i) EXPECT_EQ(w[i], 0);
    // defining property: gram * w = delta
    RatMatrix g(h2.gram);
    for (std::size_t i = 0; i < 23; ++i) {
        Rat acc = 0;
        for (std::size_t j = 0; j < 23; ++j) acc += g(i, j) * w[j];
        EXPECT_EQ(acc, delta[i]);
    }
    Lattice degen = make_lattice(IntMatrix{{0, 0}, {0, 2}}, "degenerate");
    EXPECT_THROW(dual_coordinates(degen, RatVec{Rat(1), Rat(0)}), ValidationError);
}
