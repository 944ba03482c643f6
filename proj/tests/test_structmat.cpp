#include <bimops/polynomial.hpp>
#include <bimops/structmat.hpp>

#include <gtest/gtest.h>

using namespace bimops;

TEST(BuildL, MatchesDisplayedSelectionMatrices) {
    EXPECT_EQ(build_L(1, 1).matrix, (RatMatrix{{1, 0, 0}, {0, 1, 0}}));
    EXPECT_EQ(build_L(1, 2).matrix, (RatMatrix{{0, 1, 0}, {0, 0, 1}}));
    EXPECT_EQ(build_L(0, 1).matrix, (RatMatrix{{1, 0}}));
    EXPECT_THROW(build_L(-1, 1), std::invalid_argument);
    EXPECT_THROW(build_L(1, 3), std::invalid_argument);
}

TEST(BuildL, ShiftsCanonicalMonomials) {
    for (int n = 0; n <= 8; ++n) {
        EXPECT_EQ(build_L(n, 1).matrix * monomial_vector(n + 1), Polynomial::x() * monomial_vector(n));
        EXPECT_EQ(build_L(n, 2).matrix * monomial_vector(n + 1), Polynomial::y() * monomial_vector(n));
    }
    // L_{2,1} [x^3, x^2 y, x y^2, y^3] = [x * x^2, x * xy, x * y^2].
    PolyVector expected{Polynomial::monomial(3, 0), Polynomial::monomial(2, 1), Polynomial::monomial(1, 2)};
    EXPECT_EQ(build_L(2, 1).matrix * monomial_vector(3), expected);
}

TEST(BuildJ, MatchesDisplayedPatterns) {
    EXPECT_EQ(build_J(1, 0, 0).matrix, (RatMatrix{{1, 0, 0}, {0, 0, 1}}));
    EXPECT_EQ(build_J(1, 0, 1).matrix, (RatMatrix{{0, 1, 0, 0}, {0, 0, 0, 1}}));
    EXPECT_EQ(build_J(1, 1, 1).matrix, (RatMatrix{{0, 1, 0, 0, 0}, {0, 0, 0, 1, 0}}));
    EXPECT_EQ(build_J(1, 1, 0).matrix, (RatMatrix{{1, 0, 0, 0}, {0, 0, 1, 0}}));
}

TEST(BuildJ, NegativeIndexShapes) {
    EXPECT_EQ(j_matrix(-1, 0, 0).shape(), "0x0");
    EXPECT_EQ(j_matrix(-1, 1, 1).shape(), "0x1");
    EXPECT_EQ(l_matrix(-1, 2).shape(), "0x1");
}

TEST(StructuralInvariants, RankAndOrthogonality) {
    for (int n = 0; n <= 12; ++n) {
        for (int k = 1; k <= 2; ++k) EXPECT_EQ(rank(build_L(n, k).matrix), static_cast<std::size_t>(n + 1));
        for (int i = 0; i <= 1; ++i)
            for (int j = 0; j <= 1; ++j) {
                const RatMatrix jm = build_J(n, i, j).matrix;
                EXPECT_EQ(jm.cols(), static_cast<std::size_t>(2 * n + 1 + i + j));
                EXPECT_EQ(jm * jm.transpose(), RatMatrix::identity(n + 1));
                const RatMatrix proj = jm.transpose() * jm;
                Rational trace;
                for (std::size_t r = 0; r < proj.rows(); ++r) {
                    trace += proj(r, r);
                    EXPECT_TRUE(proj(r, r) == 0 || proj(r, r) == 1);
                    for (std::size_t c = 0; c < proj.cols(); ++c)
                        if (r != c) EXPECT_EQ(proj(r, c), 0);
                }
                EXPECT_EQ(trace, n + 1);
            }
    }
}

TEST(JLIdentities, DegreeZeroFirstIdentity) {
    // J_0^{(0,0)} L_{0,1} = [1, 0] = J_0^{(1,0)}.
    EXPECT_EQ(build_J(0, 0, 0).matrix * build_L(0, 1).matrix, (RatMatrix{{1, 0}}));
    EXPECT_EQ(build_J(0, 1, 0).matrix, (RatMatrix{{1, 0}}));
    const auto records = verify_JL_identities(0);
    EXPECT_EQ(records.size(), 8u);
    EXPECT_TRUE(all_passed(records));
}

TEST(JLIdentities, AllPassUpToTwelve) {
    const auto records = verify_JL_identities(12);
    EXPECT_EQ(records.size(), 4u * 13u * 2u);
    for (const auto& r : records) EXPECT_TRUE(r.passed) << r.identity << " " << r.detail;
}

namespace {
// J with the last one of row 0 moved one column to the right.
RatMatrix corrupted_j(int n, int i, int j) {
    RatMatrix m = j_matrix(n, i, j);
    if (n == 1 && i == 0 && j == 0) {
        m(0, 0) = 0;
        m(0, 1) = 1;
    }
    return m;
}
} // namespace

TEST(JLIdentities, CorruptedJIsFlagged) {
    SelectionSource src;
    src.j = &corrupted_j;
    const auto records = verify_JL_identities(2, src);
    int failures = 0;
    for (const auto& r : records) {
        if (r.passed) continue;
        ++failures;
        EXPECT_TRUE(r.witness.has_value() || !r.detail.empty());
    }
    EXPECT_GT(failures, 0);
    EXPECT_FALSE(all_passed(records));
}
