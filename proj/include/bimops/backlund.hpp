#pragma once

#include <bimops/errors.hpp>
#include <bimops/matrix.hpp>
#include <bimops/mops.hpp>
#include <bimops/quadratic.hpp>
#include <bimops/records.hpp>
#include <bimops/structmat.hpp>

#include <array>
#include <string>
#include <vector>

namespace bimops {

/// Gamma_{n,k} of an xy-symmetric family for 0 <= n <= depth; shaped empties below.
struct GammaSequence {
    std::string label;
    /// gamma[n][k-1] for n = 0..depth; gamma[0][*] is 1x0.
    std::vector<std::array<RatMatrix, 2>> gamma;

    int depth() const noexcept { return static_cast<int>(gamma.size()) - 1; }

    const RatMatrix& operator()(int n, int k) const {
        static const RatMatrix none;
        if (k < 1 || k > 2) throw std::invalid_argument("Gamma: k must be 1 or 2");
        if (n < 0) return none;
        if (n > depth())
            throw InsufficientDepth("Gamma_" + std::to_string(n) + " requested from " + label + ", populated to " +
                                    std::to_string(depth()));
        return gamma[n][k - 1];
    }
};

inline GammaSequence gamma_sequence(const MopsFamily& sym) {
    GammaSequence g{sym.label, {}};
    for (int n = 0; n <= sym.max_degree(); ++n) g.gamma.push_back({symmetric_gamma(sym, n, 1), symmetric_gamma(sym, n, 2)});
    return g;
}

/// rank Gamma_{n,k} = n for every populated n.
inline IdentityRecords verify_gamma_ranks(const GammaSequence& g) {
    IdentityRecords out;
    for (int n = 1; n <= g.depth(); ++n)
        for (int k = 1; k <= 2; ++k) {
            const std::size_t r = rank(g(n, k));
            IdentityRecord rec{"gamma_rank", {{"n", n}, {"k", k}}, r == static_cast<std::size_t>(n), {}, std::nullopt};
            if (!rec.passed) {
                rec.detail = "rank " + std::to_string(r) + ", expected " + std::to_string(n);
                rec.witness = g(n, k);
            }
            out.push_back(std::move(rec));
        }
    return out;
}

namespace detail {

inline void require_pair(int i, int j) {
    if (i < 0 || i > 1 || j < 0 || j > 1) throw std::invalid_argument("family tag must be in {0,1}^2");
}

inline void require_k(int k) {
    if (k < 1 || k > 2) throw std::invalid_argument("k must be 1 or 2");
}

} // namespace detail

/*
 * Three-term coefficients of small family (i,j), read off Gamma:
 *   D = J [L_{m,k} Gamma_{m+1,k} + Gamma_{m,k} L_{m-1,k}] J^T,
 *   C = J Gamma_{m,k} Gamma_{m-1,k} J'^T,
 * with m = 2n (0,0), 2n+2 (1,1), 2n+1 (1,0) and (0,1); J = J_n^{(i,j)}, J' = J_{n-1}^{(i,j)}.
 */
inline ThreeTermCoefficients backlund_coeffs(const GammaSequence& g, int i, int j, int n, int k) {
    detail::require_pair(i, j);
    detail::require_k(k);
    if (n < 0) throw std::invalid_argument("backlund_coeffs: negative degree");
    const int m = i == j ? 2 * n + 2 * i : 2 * n + 1;
    const RatMatrix jn = j_matrix(n, i, j), jprev = j_matrix(n - 1, i, j);
    const RatMatrix bracket = l_matrix(m, k) * g(m + 1, k) + g(m, k) * l_matrix(m - 1, k);
    return {jn * bracket * jn.transpose(), jn * g(m, k) * g(m - 1, k) * jprev.transpose()};
}

/*
 * Short-relation matrices between the small families. The J on the
 * "modified" side follows k: (2-k,k-1) and (k-1,2-k) are the families
 * multiplied by x_k and by the other variable.
 */
inline RatMatrix gamma_hat(const GammaSequence& g, int i, int j, int n, int k) {
    detail::require_pair(i, j);
    detail::require_k(k);
    if (n < 0) throw std::invalid_argument("gamma_hat: negative degree");
    const int ak = 2 - k, bk = k - 1; // (2-k, k-1)
    if (i == 0 && j == 0) return j_matrix(n, 0, 0) * g(2 * n, k) * j_matrix(n - 1, ak, bk).transpose();
    if (i == 0 && j == 1) return j_matrix(n - 1, 1, 1) * g(2 * n, k) * j_matrix(n - 1, bk, ak).transpose();
    if (i == 1 && j == 1) return j_matrix(n, bk, ak) * g(2 * n + 1, k) * j_matrix(n - 1, 1, 1).transpose();
    return j_matrix(n, ak, bk) * g(2 * n + 1, k) * j_matrix(n, 0, 0).transpose();
}

struct ChristoffelConnection {
    RatMatrix m; // (n+1) x n
    RatMatrix n; // (n+1) x (n+1)
};

/*
 * fam* is the MOPS of the normalized functional (a x + b y) F / c with
 * c = a F(x) + b F(y). Then P_n = P*_n + M_n P*_{n-1} and
 * (a x + b y) P*_n = (a L_{n,1} + b L_{n,2}) P_{n+1} + N_n P_n with
 *   M_n = H_n (a L_{n-1,1} + b L_{n-1,2})^T (c H*_{n-1})^{-1},  N_n = c H*_n H_n^{-1}.
 * Both relations are checked exactly; failure means fam* is not the modification of fam.
 */
inline ChristoffelConnection christoffel_connection(const MopsFamily& fam, const MopsFamily& star, const Rational& a,
                                                    const Rational& b, int n) {
    if (n < 0) throw std::invalid_argument("christoffel_connection: negative degree");
    const Rational c = a * fam.functional.moment(1, 0) + b * fam.functional.moment(0, 1);
    if (sgn(c) <= 0) throw NonPositiveMass("christoffel_connection: a F(x) + b F(y) must be positive");
    ChristoffelConnection out;
    const RatMatrix lt = (a * l_matrix(n - 1, 1) + b * l_matrix(n - 1, 2)).transpose();
    out.m = n == 0 ? RatMatrix(1, 0) : solve(c * star.gram_at(n - 1), (fam.gram_at(n) * lt).transpose()).transpose();
    out.n = solve(fam.gram_at(n), c * star.gram_at(n)).transpose();

    const Polynomial lambda = Polynomial(a) * Polynomial::x() + Polynomial(b) * Polynomial::y();
    const PolyVector first = star.slice(n) + out.m * star.slice(n - 1);
    const PolyVector second = (a * l_matrix(n, 1) + b * l_matrix(n, 2)) * fam.slice(n + 1) + out.n * fam.slice(n);
    const auto r1 = compare_vectors("christoffel_first", {{"n", n}}, fam.slice(n), first);
    const auto r2 = compare_vectors("christoffel_second", {{"n", n}}, lambda * star.slice(n), second);
    if (!r1.passed || !r2.passed)
        throw NotChristoffelPair(fam.label + " / " + star.label + " at degree " + std::to_string(n) + ": " +
                                 (r1.passed ? r2.detail : r1.detail));
    return out;
}

// ---------------------------------------------------------------------------
// Block factors
// ---------------------------------------------------------------------------

enum class FactorKind { L0, L1, U0, U1 };

inline const char* to_string(FactorKind k) {
    switch (k) {
    case FactorKind::L0: return "L0";
    case FactorKind::L1: return "L1";
    case FactorKind::U0: return "U0";
    case FactorKind::U1: return "U1";
    }
    return "?";
}

/// Offset of block row n in the dense layout (block n has n+1 rows).
inline std::size_t block_offset(int n) { return static_cast<std::size_t>(n) * (n + 1) / 2; }

/*
 * Truncated block bidiagonal matrix over blocks 0..truncation.
 * Lower factors: diagonal I, off_diagonal[n] at block (n+1, n).
 * Upper factors: off_diagonal[n] at block (n, n+1).
 */
struct BlockFactor {
    FactorKind kind = FactorKind::L0;
    int k = 1;
    int truncation = 0;
    std::vector<RatMatrix> diagonal;
    std::vector<RatMatrix> off_diagonal;

    bool lower() const noexcept { return kind == FactorKind::L0 || kind == FactorKind::L1; }

    RatMatrix dense() const {
        const std::size_t dim = block_offset(truncation + 1);
        RatMatrix out(dim, dim);
        for (int n = 0; n <= truncation; ++n) out.set_block(block_offset(n), block_offset(n), diagonal[n]);
        for (int n = 0; n < truncation; ++n) {
            if (lower())
                out.set_block(block_offset(n + 1), block_offset(n), off_diagonal[n]);
            else
                out.set_block(block_offset(n), block_offset(n + 1), off_diagonal[n]);
        }
        return out;
    }
};

struct BlockFactors {
    BlockFactor l0, l1, u0, u1;
};

/// Diagonal blocks indexed from 0: U0 uses Gamma-hat^{(0,1)}_{n+1}, so blocks stay square.
inline BlockFactors block_factors(const GammaSequence& g, int k, int truncation) {
    detail::require_k(k);
    if (truncation < 0) throw std::invalid_argument("block_factors: negative truncation");
    const int N = truncation;
    BlockFactors f{{FactorKind::L0, k, N, {}, {}},
                   {FactorKind::L1, k, N, {}, {}},
                   {FactorKind::U0, k, N, {}, {}},
                   {FactorKind::U1, k, N, {}, {}}};
    for (int n = 0; n <= N; ++n) {
        f.l0.diagonal.push_back(RatMatrix::identity(n + 1));
        f.l1.diagonal.push_back(RatMatrix::identity(n + 1));
        f.u0.diagonal.push_back(gamma_hat(g, 0, 1, n + 1, k));
        f.u1.diagonal.push_back(gamma_hat(g, 1, 0, n, k));
    }
    for (int n = 0; n < N; ++n) {
        f.l0.off_diagonal.push_back(gamma_hat(g, 0, 0, n + 1, k));
        f.l1.off_diagonal.push_back(gamma_hat(g, 1, 1, n + 1, k));
        f.u0.off_diagonal.push_back(l_matrix(n, k));
        f.u1.off_diagonal.push_back(l_matrix(n, k));
    }
    return f;
}

/// Block Jacobi operator of x_k on a family, blocks 0..truncation: L above, D on, C below the diagonal.
inline RatMatrix jacobi_operator(const MopsFamily& fam, int k, int truncation) {
    const std::size_t dim = block_offset(truncation + 1);
    RatMatrix out(dim, dim);
    for (int n = 0; n <= truncation; ++n) {
        const auto tt = three_term(fam, n, k);
        out.set_block(block_offset(n), block_offset(n), tt.d);
        if (n > 0) out.set_block(block_offset(n), block_offset(n - 1), tt.c);
        if (n < truncation) out.set_block(block_offset(n), block_offset(n + 1), l_matrix(n, k));
    }
    return out;
}

/*
 * The four factorizations against the Jacobi operators of the small families:
 *   L0 U1 ~ (0,0), U0 L1 ~ (1,1), U1 L0 ~ (2-k,k-1), L1 U0 ~ (k-1,2-k).
 * L U products are exact on every block of the truncation; U L products
 * miss the contribution of block N+1, so their last block row and column are dropped.
 */
inline IdentityRecords verify_block_factors(const GammaSequence& g, const QuadDecomposition& d, int k, int truncation) {
    IdentityRecords out;
    const int N = truncation;
    const std::vector<std::pair<std::string, int>> idx{{"k", k}, {"N", N}};
    BlockFactors f;
    try {
        f = block_factors(g, k, N);
    } catch (const std::exception& e) {
        for (const char* name : {"L0U1", "U0L1", "U1L0", "L1U0"}) out.push_back({name, idx, false, e.what(), std::nullopt});
        return out;
    }
    struct Case {
        const char* name;
        const BlockFactor* left;
        const BlockFactor* right;
        int i, j;
    };
    const Case cases[] = {{"L0U1", &f.l0, &f.u1, 0, 0},
                          {"U0L1", &f.u0, &f.l1, 1, 1},
                          {"U1L0", &f.u1, &f.l0, 2 - k, k - 1},
                          {"L1U0", &f.l1, &f.u0, k - 1, 2 - k}};
    for (const auto& c : cases)
        out.push_back(guarded(c.name, idx, [&] {
            const RatMatrix product = c.left->dense() * c.right->dense();
            const RatMatrix jacobi = jacobi_operator(d.small_family(c.i, c.j), k, N);
            const std::size_t keep = c.left->lower() ? block_offset(N + 1) : block_offset(N);
            return compare_matrices(c.name, idx, product.block(0, 0, keep, keep), jacobi.block(0, 0, keep, keep));
        }));
    return out;
}

// ---------------------------------------------------------------------------
// Identity checks against a decomposition
// ---------------------------------------------------------------------------

/// backlund_coeffs against three_term on the independently built small family, and the polynomial TTR itself.
inline IdentityRecords verify_backlund(const GammaSequence& g, const QuadDecomposition& d, int i, int j, int n, int k) {
    const std::vector<std::pair<std::string, int>> idx{{"i", i}, {"j", j}, {"n", n}, {"k", k}};
    IdentityRecords out;
    ThreeTermCoefficients bc, direct;
    try {
        bc = backlund_coeffs(g, i, j, n, k);
        direct = three_term(d.small_family(i, j), n, k);
    } catch (const std::exception& e) {
        for (const char* name : {"backlund_D", "backlund_C", "small_three_term"}) out.push_back({name, idx, false, e.what(), std::nullopt});
        return out;
    }
    out.push_back(compare_matrices("backlund_D", idx, bc.d, direct.d));
    out.push_back(compare_matrices("backlund_C", idx, bc.c, direct.c));
    IdentityRecord ttr = verify_three_term(d.small_family(i, j), n, k, bc);
    ttr.identity = "small_three_term";
    ttr.indices = idx;
    out.push_back(std::move(ttr));
    return out;
}

/// The four short relations between small families.
inline IdentityRecords verify_corollary(const GammaSequence& g, const QuadDecomposition& d, int n, int k) {
    const std::vector<std::pair<std::string, int>> idx{{"n", n}, {"k", k}};
    const int a = 2 - k, b = k - 1;
    auto p = [&](int i, int j, int m) { return d.small_family(i, j).slice(m); };
    const Polynomial xk = Polynomial::variable(k);
    IdentityRecords out;
    out.push_back(guarded("short_00", idx, [&] {
        return compare_vectors("short_00", idx, p(0, 0, n), p(a, b, n) + gamma_hat(g, 0, 0, n, k) * p(a, b, n - 1));
    }));
    out.push_back(guarded("short_11_up", idx, [&] {
        return compare_vectors("short_11_up", idx, xk * p(1, 1, n - 1),
                               l_matrix(n - 1, k) * p(b, a, n) + gamma_hat(g, 0, 1, n, k) * p(b, a, n - 1));
    }));
    out.push_back(guarded("short_11", idx, [&] {
        return compare_vectors("short_11", idx, p(b, a, n), p(1, 1, n) + gamma_hat(g, 1, 1, n, k) * p(1, 1, n - 1));
    }));
    out.push_back(guarded("short_00_up", idx, [&] {
        return compare_vectors("short_00_up", idx, xk * p(a, b, n),
                               l_matrix(n, k) * p(0, 0, n + 1) + gamma_hat(g, 1, 0, n, k) * p(0, 0, n));
    }));
    return out;
}

/// Short relations between the big families, in the variables (u, v).
inline IdentityRecords verify_big_relations(const GammaSequence& g, const QuadDecomposition& d, int n, int k) {
    const std::vector<std::pair<std::string, int>> idx{{"n", n}, {"k", k}};
    const int a = 2 - k, b = k - 1;
    auto big = [&](int i, int j, int m) { return d.big_family(i, j).slice(m); };
    const Polynomial xk = Polynomial::variable(k);
    IdentityRecords out;
    out.push_back(guarded("big_short_00", idx, [&] {
        return compare_vectors("big_short_00", idx, big(0, 0, n),
                               l_matrix(2 * n, k) * big(a, b, n) + g(2 * n, k) * big(a, b, n - 1));
    }));
    out.push_back(guarded("big_short_11_up", idx, [&] {
        return compare_vectors("big_short_11_up", idx, xk * big(1, 1, n - 1),
                               l_matrix(2 * n, k) * big(b, a, n) + g(2 * n, k) * big(b, a, n - 1));
    }));
    out.push_back(guarded("big_short_11", idx, [&] {
        return compare_vectors("big_short_11", idx, big(b, a, n),
                               l_matrix(2 * n + 1, k) * big(1, 1, n) + g(2 * n + 1, k) * big(1, 1, n - 1));
    }));
    out.push_back(guarded("big_short_00_up", idx, [&] {
        return compare_vectors("big_short_00_up", idx, xk * big(a, b, n),
                               l_matrix(2 * n + 1, k) * big(0, 0, n + 1) + g(2 * n + 1, k) * big(0, 0, n));
    }));
    return out;
}

/// Three-term relations of the big families (four records per n, k).
inline IdentityRecords verify_big_three_term(const GammaSequence& g, const QuadDecomposition& d, int n, int k) {
    const std::vector<std::pair<std::string, int>> idx{{"n", n}, {"k", k}};
    auto big = [&](int i, int j, int m) { return d.big_family(i, j).slice(m); };
    const Polynomial xk = Polynomial::variable(k);
    auto coeffs = [&](int m) {
        return std::array<RatMatrix, 3>{l_matrix(m, k) * l_matrix(m + 1, k),
                                        l_matrix(m, k) * g(m + 1, k) + g(m, k) * l_matrix(m - 1, k),
                                        g(m, k) * g(m - 1, k)};
    };
    IdentityRecords out;
    // (family, shift of the lhs index, m)
    struct Case {
        const char* name;
        int i, j, lhs, m;
    };
    const Case cases[] = {{"big_ttr_00", 0, 0, n, 2 * n},
                          {"big_ttr_11", 1, 1, n - 1, 2 * n},
                          {"big_ttr_10", 1, 0, n, 2 * n + 1},
                          {"big_ttr_01", 0, 1, n, 2 * n + 1}};
    for (const auto& c : cases)
        out.push_back(guarded(c.name, idx, [&] {
            const auto [up, mid, down] = coeffs(c.m);
            return compare_vectors(c.name, idx, xk * big(c.i, c.j, c.lhs),
                                   up * big(c.i, c.j, c.lhs + 1) + mid * big(c.i, c.j, c.lhs) +
                                       down * big(c.i, c.j, c.lhs - 1));
        }));
    return out;
}

/*
 * Christoffel connection matrices against Gamma-hat:
 * (0,0) -> (2-k,k-1) by x_k gives M = Gamma-hat^{(0,0)}_n, N = Gamma-hat^{(1,0)}_n;
 * (k-1,2-k) -> (1,1) by x_k gives M = Gamma-hat^{(1,1)}_n, N = Gamma-hat^{(0,1)}_{n+1}.
 */
inline IdentityRecords verify_connection_vs_gamma_hat(const GammaSequence& g, const QuadDecomposition& d, int n, int k) {
    const std::vector<std::pair<std::string, int>> idx{{"n", n}, {"k", k}};
    const int a = 2 - k, b = k - 1;
    const Rational ca = k == 1 ? 1 : 0, cb = k == 1 ? 0 : 1;
    IdentityRecords out;
    auto check = [&](const char* name, int fi, int fj, int si, int sj, auto m_ref, auto n_ref) {
        try {
            const auto conn = christoffel_connection(d.small_family(fi, fj), d.small_family(si, sj), ca, cb, n);
            out.push_back(compare_matrices(std::string(name) + "_M", idx, conn.m, m_ref()));
            out.push_back(compare_matrices(std::string(name) + "_N", idx, conn.n, n_ref()));
        } catch (const std::exception& e) {
            out.push_back({std::string(name) + "_M", idx, false, e.what(), std::nullopt});
            out.push_back({std::string(name) + "_N", idx, false, e.what(), std::nullopt});
        }
    };
    check("connection_00", 0, 0, a, b, [&] { return gamma_hat(g, 0, 0, n, k); }, [&] { return gamma_hat(g, 1, 0, n, k); });
    check("connection_11", b, a, 1, 1, [&] { return gamma_hat(g, 1, 1, n, k); }, [&] { return gamma_hat(g, 0, 1, n + 1, k); });
    return out;
}

} // namespace bimops
