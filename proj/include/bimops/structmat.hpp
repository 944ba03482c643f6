#pragma once

#include <bimops/matrix.hpp>
#include <bimops/records.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bimops {

/*
 * Selection matrices of the canonical basis.
 *
 * L(n, k) is (n+1) x (n+2): [I | 0] for k = 1 and [0 | I] for k = 2, so that
 * L(n,1) X_{n+1} = x X_n and L(n,2) X_{n+1} = y X_n.
 *
 * J(n, i, j) is (n+1) x (2n+1+i+j) with ones exactly at (h, 2h+j). It picks
 * the entries of a zip-interleaved vector that belong to parity class (i, j).
 *
 * Both accept n = -1 and then return the empty shape implied by the formula
 * (clamped at zero), which is the "negative index gives zero" convention of
 * the recurrence formulas.
 */
struct LMatrix {
    int n;
    int k;
    RatMatrix matrix;
};

struct JMatrix {
    int n;
    int i;
    int j;
    RatMatrix matrix;
};

inline RatMatrix l_matrix(int n, int k) {
    if (k != 1 && k != 2) throw std::invalid_argument("variable index k must be 1 or 2");
    if (n < -1) throw std::invalid_argument("L matrix degree below -1");
    const auto rows = static_cast<std::size_t>(n + 1);
    RatMatrix m(rows, rows + 1);
    const std::size_t offset = k == 1 ? 0 : 1;
    for (std::size_t r = 0; r < rows; ++r) m(r, r + offset) = 1;
    return m;
}

inline RatMatrix j_matrix(int n, int i, int j) {
    if ((i != 0 && i != 1) || (j != 0 && j != 1)) throw std::invalid_argument("parity flags must be 0 or 1");
    if (n < -1) throw std::invalid_argument("J matrix degree below -1");
    const auto rows = static_cast<std::size_t>(n + 1);
    const auto cols = static_cast<std::size_t>(std::max(0, 2 * n + 1 + i + j));
    RatMatrix m(rows, cols);
    for (std::size_t h = 0; h < rows; ++h) m(h, 2 * h + j) = 1;
    return m;
}

inline LMatrix build_L(int n, int k) {
    if (n < 0) throw std::invalid_argument("build_L: n must be >= 0");
    return {n, k, l_matrix(n, k)};
}

inline JMatrix build_J(int n, int i, int j) {
    if (n < 0) throw std::invalid_argument("build_J: n must be >= 0");
    return {n, i, j, j_matrix(n, i, j)};
}

/// Matrix source for the J-L identities; swappable so tests can inject a corrupted J.
struct SelectionSource {
    RatMatrix (*l)(int, int) = &l_matrix;
    RatMatrix (*j)(int, int, int) = &j_matrix;
};

/*
 * For 0 <= n <= n_max and k in {1, 2}:
 *   J(n,0,0)       L(2n,k)   = J(n, 2-k, k-1)
 *   J(n,1,1)       L(2n+2,k) = L(n,k) J(n+1, k-1, 2-k)
 *   J(n,k-1,2-k)   L(2n+1,k) = J(n,1,1)
 *   J(n,2-k,k-1)   L(2n+1,k) = L(n,k) J(n+1, 0, 0)
 */
inline IdentityRecords verify_JL_identities(int n_max, SelectionSource src = {}) {
    IdentityRecords out;
    auto attempt = [&](const char* name, int n, int k, auto lhs, auto rhs) {
        try {
            out.push_back(compare_matrices(name, {{"n", n}, {"k", k}}, lhs(), rhs()));
        } catch (const std::exception& e) {
            out.push_back({name, {{"n", n}, {"k", k}}, false, e.what(), std::nullopt});
        }
    };
    for (int n = 0; n <= n_max; ++n) {
        for (int k = 1; k <= 2; ++k) {
            attempt("JL1", n, k, [&] { return src.j(n, 0, 0) * src.l(2 * n, k); },
                    [&] { return src.j(n, 2 - k, k - 1); });
            attempt("JL2", n, k, [&] { return src.j(n, 1, 1) * src.l(2 * n + 2, k); },
                    [&] { return src.l(n, k) * src.j(n + 1, k - 1, 2 - k); });
            attempt("JL3", n, k, [&] { return src.j(n, k - 1, 2 - k) * src.l(2 * n + 1, k); },
                    [&] { return src.j(n, 1, 1); });
            attempt("JL4", n, k, [&] { return src.j(n, 2 - k, k - 1) * src.l(2 * n + 1, k); },
                    [&] { return src.l(n, k) * src.j(n + 1, 0, 0); });
        }
    }
    return out;
}

} // namespace bimops
