#include <bimops/backlund.hpp>

#include <gtest/gtest.h>

#include <map>

#include "test_util.hpp"

using namespace bimops;
using bimops::testing::q;

namespace {

struct Fixture {
    MopsFamily sym;
    GammaSequence gamma;
    QuadDecomposition dec;
};

// Symmetric family to degree 12: Gamma through 12, small families through 5.
const Fixture& fixture(const std::string& name) {
    static std::map<std::string, Fixture> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    MomentFunctional f = name == "square" ? square_legendre()
                         : name == "ball0" ? ball(0)
                         : name == "ball1" ? ball(1)
                                           : ball(q(1, 2));
    MopsFamily sym = build_mops(f, 12, name);
    GammaSequence g = gamma_sequence(sym);
    QuadDecomposition d = decompose(sym, 5);
    return cache.emplace(name, Fixture{std::move(sym), std::move(g), std::move(d)}).first->second;
}

const std::vector<std::string> kFamilies{"square", "ball0", "ball1", "ballhalf"};

void expect_all_passed(const IdentityRecords& records, const std::string& context) {
    for (const auto& r : records) {
        std::string idx;
        for (const auto& [name, v] : r.indices) idx += " " + name + "=" + std::to_string(v);
        EXPECT_TRUE(r.passed) << context << " " << r.identity << idx << ": " << r.detail;
    }
}

} // namespace

TEST(GammaSequence, ShapesAndDepth) {
    const auto& g = fixture("square").gamma;
    EXPECT_EQ(g.depth(), 12);
    EXPECT_EQ(g(0, 1).shape(), "1x0");
    EXPECT_EQ(g(-1, 2).shape(), "0x0");
    EXPECT_EQ(g(5, 2).shape(), "6x5");
    EXPECT_THROW(g(13, 1), InsufficientDepth);
    expect_all_passed(verify_gamma_ranks(g), "square");
}

TEST(BacklundCoeffs, SquareExamples) {
    const auto& g = fixture("square").gamma;
    const auto bc = backlund_coeffs(g, 0, 0, 1, 1);
    EXPECT_EQ(bc.d, (RatMatrix{{q(11, 21), 0}, {0, q(1, 3)}}));
    EXPECT_EQ(bc.c, (RatMatrix{{q(4, 45)}, {0}}));
    // The bracket before the J-sandwich.
    const RatMatrix bracket = l_matrix(2, 1) * g(3, 1) + g(2, 1) * l_matrix(1, 1);
    EXPECT_EQ(bracket, (RatMatrix{{q(11, 21), 0, 0}, {0, q(3, 5), 0}, {0, 0, q(1, 3)}}));
    for (int i = 0; i <= 1; ++i)
        for (int j = 0; j <= 1; ++j)
            for (int k = 1; k <= 2; ++k) EXPECT_EQ(backlund_coeffs(g, i, j, 0, k).c.shape(), "1x0");
}

TEST(BacklundCoeffs, InsufficientDepth) {
    const auto shallow = gamma_sequence(build_mops(square_legendre(), 4));
    EXPECT_NO_THROW(backlund_coeffs(shallow, 1, 0, 1, 1));
    EXPECT_THROW(backlund_coeffs(shallow, 1, 1, 1, 1), InsufficientDepth); // needs Gamma_5
}

// Backlund coefficients equal the three-term coefficients of the independently built small families.
TEST(BacklundCoeffs, MatchDirectThreeTermForBuiltIns) {
    for (const auto& name : kFamilies) {
        const auto& fx = fixture(name);
        for (int i = 0; i <= 1; ++i)
            for (int j = 0; j <= 1; ++j)
                for (int k = 1; k <= 2; ++k)
                    for (int n = 0; n <= 4; ++n) expect_all_passed(verify_backlund(fx.gamma, fx.dec, i, j, n, k), name);
    }
}

TEST(BacklundCoeffs, CorruptedGammaIsFlagged) {
    const auto& fx = fixture("square");
    GammaSequence bad = fx.gamma;
    bad.gamma[3][0](0, 0) += q(1, 100); // row and column kept by J_1^{(0,0)}
    const auto records = verify_backlund(bad, fx.dec, 0, 0, 1, 1);
    EXPECT_FALSE(records[0].passed);
    ASSERT_TRUE(records[0].witness.has_value());
    EXPECT_FALSE(records[0].witness->is_zero());
}

TEST(GammaHat, SquareExamples) {
    const auto& g = fixture("square").gamma;
    EXPECT_EQ(gamma_hat(g, 1, 0, 0, 1), (RatMatrix{{q(1, 3)}}));
    EXPECT_EQ(gamma_hat(g, 0, 0, 1, 1), (RatMatrix{{q(4, 15)}, {0}}));
    EXPECT_EQ(gamma_hat(g, 1, 0, 1, 1), (RatMatrix{{q(9, 35), 0}, {0, q(1, 3)}}));
    EXPECT_EQ(gamma_hat(g, 0, 1, 1, 1).shape(), "1x1");
    EXPECT_EQ(gamma_hat(g, 1, 1, 1, 1).shape(), "2x1");
    EXPECT_EQ(gamma_hat(g, 0, 0, 0, 2).shape(), "1x0");
    EXPECT_EQ(gamma_hat(g, 0, 1, 0, 2).shape(), "0x0");
}

TEST(GammaHat, ShortRelationsHold) {
    for (const auto& name : kFamilies) {
        const auto& fx = fixture(name);
        for (int k = 1; k <= 2; ++k)
            for (int n = 0; n <= 4; ++n) expect_all_passed(verify_corollary(fx.gamma, fx.dec, n, k), name);
    }
}

TEST(GammaHat, SquareShortRelationByHand) {
    // P^(0,0)_1 - P^(1,0)_1 = [u - 1/3 - (u - 3/5), 0] = [4/15, 0].
    const auto& d = fixture("square").dec;
    const PolyVector diff = d.small_family(0, 0).slice(1) - d.small_family(1, 0).slice(1);
    EXPECT_EQ(diff, (PolyVector{Polynomial(q(4, 15)), Polynomial()}));
}

TEST(BigFamilies, ShortRelations) {
    for (const auto& name : kFamilies) {
        const auto& fx = fixture(name);
        for (int k = 1; k <= 2; ++k)
            for (int n = 0; n <= 4; ++n) expect_all_passed(verify_big_relations(fx.gamma, fx.dec, n, k), name);
    }
}

TEST(BigFamilies, ThreeTermRelations) {
    for (const auto& name : kFamilies) {
        const auto& fx = fixture(name);
        for (int k = 1; k <= 2; ++k)
            for (int n = 0; n <= 3; ++n) expect_all_passed(verify_big_three_term(fx.gamma, fx.dec, n, k), name);
    }
}

TEST(ChristoffelConnection, PushforwardExamples) {
    const auto base = build_mops(quad_pushforward(square_legendre(), 0, 0), 3, "base");
    const auto star = build_mops(quad_pushforward(square_legendre(), 1, 0), 3, "u base");
    const auto c1 = christoffel_connection(base, star, 1, 0, 1);
    EXPECT_EQ(c1.m, (RatMatrix{{q(4, 15)}, {0}}));
    const auto c0 = christoffel_connection(base, star, 1, 0, 0);
    EXPECT_EQ(c0.m.shape(), "1x0");
    // N_0 = c H*_0 H_0^{-1} with c = F(u) = 1/3; both Gram matrices are 1 after normalization.
    EXPECT_EQ(c0.n, (RatMatrix{{q(1, 3)}}));

    const auto mirrored = build_mops(quad_pushforward(square_legendre(), 0, 1), 3, "v base");
    EXPECT_EQ(christoffel_connection(base, mirrored, 0, 1, 1).m, (RatMatrix{{0}, {q(4, 15)}}));
}

TEST(ChristoffelConnection, GeneralDirection) {
    // lambda = 2u + 3v on the ball pushforward.
    const auto g = quad_pushforward(ball(1), 0, 0);
    const auto base = build_mops(g, 5);
    const auto star = build_mops(christoffel(g, 2, 3), 5);
    for (int n = 0; n <= 4; ++n) EXPECT_NO_THROW(christoffel_connection(base, star, 2, 3, n));
}

TEST(ChristoffelConnection, RejectsWrongPair) {
    const auto base = build_mops(quad_pushforward(square_legendre(), 0, 0), 3);
    const auto star = build_mops(quad_pushforward(square_legendre(), 1, 0), 3);
    EXPECT_THROW(christoffel_connection(base, star, 0, 1, 1), NotChristoffelPair);
    EXPECT_THROW(christoffel_connection(base, base, 1, 0, 1), NotChristoffelPair);
}

TEST(ChristoffelConnection, MatchesGammaHat) {
    for (const auto& name : kFamilies) {
        const auto& fx = fixture(name);
        for (int k = 1; k <= 2; ++k)
            for (int n = 0; n <= 4; ++n) expect_all_passed(verify_connection_vs_gamma_hat(fx.gamma, fx.dec, n, k), name);
    }
}

TEST(BlockFactors, SquareBlocks) {
    const auto& g = fixture("square").gamma;
    const auto f1 = block_factors(g, 1, 1);
    const RatMatrix p1 = f1.l0.dense() * f1.u1.dense();
    EXPECT_EQ(p1.block(0, 0, 1, 1), (RatMatrix{{q(1, 3)}}));
    const auto f2 = block_factors(g, 1, 2);
    const RatMatrix p2 = f2.l0.dense() * f2.u1.dense();
    EXPECT_EQ(p2.block(block_offset(1), block_offset(0), 2, 1), (RatMatrix{{q(4, 45)}, {0}}));
    EXPECT_EQ(p2.block(block_offset(0), block_offset(1), 1, 2), l_matrix(0, 1));
    EXPECT_EQ(f2.u0.diagonal[0].shape(), "1x1");
    EXPECT_EQ(f2.l1.off_diagonal[1].shape(), "3x2");
}

TEST(BlockFactors, FactorizationsMatchJacobiOperators) {
    for (const auto& name : kFamilies) {
        const auto& fx = fixture(name);
        for (int k = 1; k <= 2; ++k)
            for (int N = 0; N <= 4; ++N) {
                const auto records = verify_block_factors(fx.gamma, fx.dec, k, N);
                EXPECT_EQ(records.size(), 4u);
                expect_all_passed(records, name);
            }
    }
}

// With a 1-based diagonal, U1's first diagonal block is 2x2 next to the 1x2 block L_{0,k}.
TEST(BlockFactors, OneBasedDiagonalDoesNotFit) {
    const auto& g = fixture("square").gamma;
    EXPECT_EQ(gamma_hat(g, 1, 0, 1, 1).shape(), "2x2");
    EXPECT_EQ(l_matrix(0, 1).shape(), "1x2");
}

TEST(BlockFactors, CorruptedGammaBreaksFactorization) {
    const auto& fx = fixture("ball1");
    GammaSequence bad = fx.gamma;
    bad.gamma[2][1](2, 1) += 1; // survives the J-sandwich of Gamma-hat^{(0,0)}_{1,2}
    const auto records = verify_block_factors(bad, fx.dec, 2, 3);
    EXPECT_FALSE(all_passed(records));
}
