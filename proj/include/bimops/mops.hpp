#pragma once

#include <bimops/errors.hpp>
#include <bimops/matrix.hpp>
#include <bimops/moments.hpp>
#include <bimops/polynomial.hpp>
#include <bimops/records.hpp>
#include <bimops/structmat.hpp>

#include <string>
#include <utility>
#include <vector>

namespace bimops {

/// Monic orthogonal polynomial system of one functional, degrees 0..max_degree().
struct MopsFamily {
    MomentFunctional functional;
    std::vector<PolyVector> slices;
    /// grams[n] = (P_n, P_n).
    std::vector<RatMatrix> grams;
    std::string label;

    int max_degree() const noexcept { return static_cast<int>(slices.size()) - 1; }

    /// Slice n; the empty vector for n = -1.
    const PolyVector& slice(int n) const {
        static const PolyVector none;
        if (n < 0) return none;
        if (n > max_degree())
            throw InsufficientDepth(label + ": slice " + std::to_string(n) + " requested, built to " +
                                    std::to_string(max_degree()));
        return slices[n];
    }

    /// Gram matrix of slice n; 0x0 for n = -1.
    const RatMatrix& gram_at(int n) const {
        static const RatMatrix none;
        if (n < 0) return none;
        if (n > max_degree())
            throw InsufficientDepth(label + ": gram " + std::to_string(n) + " requested, built to " +
                                    std::to_string(max_degree()));
        return grams[n];
    }
};

/*
 * Slice n entry j is x^{n-j} y^j minus the combination of lower monomials
 * that makes it orthogonal to every monomial of total degree < n. One solve
 * per degree against the moment matrix of the lower monomials.
 */
inline PolyVector monic_slice(const MomentFunctional& f, int n) {
    if (n == 0) return {Polynomial(1)};
    const auto basis = monomials_below(n);
    const std::size_t m = basis.size();
    RatMatrix moments(m, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t s = r; s < m; ++s) {
            moments(r, s) = f.moment(basis[r].first + basis[s].first, basis[r].second + basis[s].second);
            moments(s, r) = moments(r, s);
        }
    RatMatrix rhs(m, n + 1);
    for (std::size_t r = 0; r < m; ++r)
        for (int j = 0; j <= n; ++j) rhs(r, j) = f.moment(basis[r].first + n - j, basis[r].second + j);
    RatMatrix coeffs;
    try {
        coeffs = solve(moments, rhs);
    } catch (const SingularMatrix&) {
        throw NotQuasiDefinite(n, f.description() + ": singular moment matrix below degree " + std::to_string(n));
    }
    PolyVector slice;
    slice.reserve(n + 1);
    for (int j = 0; j <= n; ++j) {
        Polynomial p = Polynomial::monomial(n - j, j);
        for (std::size_t r = 0; r < m; ++r) p.add_term(basis[r].first, basis[r].second, -coeffs(r, j));
        slice.push_back(std::move(p));
    }
    return slice;
}

inline MopsFamily build_mops(const MomentFunctional& f, int max_degree, std::string label = {}) {
    if (max_degree < 0) throw std::invalid_argument("build_mops: negative degree");
    MopsFamily fam{f, {}, {}, label.empty() ? f.description() : std::move(label)};
    for (int n = 0; n <= max_degree; ++n) {
        PolyVector slice = monic_slice(f, n);
        // Orthogonality to lower degrees lets the canonical monomials stand in for the right factor.
        RatMatrix h = gram(f, slice, monomial_vector(n));
        if (!h.is_symmetric() || !is_positive_definite(h))
            throw NotQuasiDefinite(n, f.description() + ": Gram matrix not positive definite");
        fam.slices.push_back(std::move(slice));
        fam.grams.push_back(std::move(h));
    }
    return fam;
}

/// Family assembled from given slices; Gram matrices are recomputed under `f`.
inline MopsFamily family_from_slices(const MomentFunctional& f, std::vector<PolyVector> slices, std::string label) {
    MopsFamily fam{f, std::move(slices), {}, std::move(label)};
    for (const auto& s : fam.slices) fam.grams.push_back(gram(f, s, s));
    return fam;
}

/// Gamma_{n,k} = S_n L_{n-1,k}^T S_{n-1}^{-1} of an xy-symmetric family; 1x0 at n = 0.
inline RatMatrix symmetric_gamma(const MopsFamily& fam, int n, int k) {
    if (!fam.functional.is_xy_symmetric())
        throw NotSymmetric("symmetric_gamma: " + fam.label + " is not xy-symmetric");
    if (n < 0) return RatMatrix(0, 0);
    if (n == 0) return RatMatrix(1, 0);
    // (S_{n-1}^{-1} L S_n)^T, using symmetry of both Gram matrices.
    return solve(fam.gram_at(n - 1), l_matrix(n - 1, k) * fam.gram_at(n)).transpose();
}

struct ThreeTermCoefficients {
    RatMatrix d; // (n+1) x (n+1)
    RatMatrix c; // (n+1) x n
};

/*
 * x_k P_n = L_{n,k} P_{n+1} + D P_n + C P_{n-1} with
 * D H_n = (x_k P_n, P_n) and C H_{n-1} = H_n L_{n-1,k}^T.
 */
inline ThreeTermCoefficients three_term(const MopsFamily& fam, int n, int k) {
    if (n < 0) throw std::invalid_argument("three_term: negative degree");
    const PolyVector& pn = fam.slice(n);
    const RatMatrix& hn = fam.gram_at(n);
    RatMatrix moment_x = gram(fam.functional, Polynomial::variable(k) * pn, pn);
    ThreeTermCoefficients out;
    out.d = solve(hn, moment_x.transpose()).transpose();
    out.c = n == 0 ? RatMatrix(1, 0) : solve(fam.gram_at(n - 1), l_matrix(n - 1, k) * hn).transpose();
    return out;
}

/// Checks x_k P_n = L P_{n+1} + D P_n + C P_{n-1} as a polynomial identity.
inline IdentityRecord verify_three_term(const MopsFamily& fam, int n, int k, const ThreeTermCoefficients& tt) {
    return guarded("three_term", {{"n", n}, {"k", k}}, [&] {
        PolyVector rhs = l_matrix(n, k) * fam.slice(n + 1) + tt.d * fam.slice(n) + tt.c * fam.slice(n - 1);
        return compare_vectors("three_term", {{"n", n}, {"k", k}}, Polynomial::variable(k) * fam.slice(n), rhs);
    });
}

/// Checks x_k S_n = L S_{n+1} + Gamma S_{n-1} for an xy-symmetric family.
inline IdentityRecord verify_symmetric_three_term(const MopsFamily& fam, int n, int k) {
    return guarded("symmetric_three_term", {{"n", n}, {"k", k}}, [&] {
        PolyVector rhs = l_matrix(n, k) * fam.slice(n + 1) + symmetric_gamma(fam, n, k) * fam.slice(n - 1);
        return compare_vectors("symmetric_three_term", {{"n", n}, {"k", k}}, Polynomial::variable(k) * fam.slice(n),
                               rhs);
    });
}

/// Cross-degree Gram blocks vanish and every diagonal Gram block is positive definite.
inline IdentityRecords verify_orthogonality(const MopsFamily& fam) {
    IdentityRecords out;
    for (int n = 0; n <= fam.max_degree(); ++n) {
        out.push_back(guarded("positive_definite", {{"n", n}}, [&] {
            RatMatrix h = gram(fam.functional, fam.slices[n], fam.slices[n]);
            IdentityRecord rec{"positive_definite", {{"n", n}}, false, {}, std::nullopt};
            rec.passed = h.is_symmetric() && is_positive_definite(h);
            if (!rec.passed) {
                rec.detail = NotQuasiDefinite(n, fam.label).what();
                rec.witness = std::move(h);
            }
            return rec;
        }));
        for (int m = n + 1; m <= fam.max_degree(); ++m)
            out.push_back(guarded("orthogonality", {{"n", n}, {"m", m}}, [&] {
                RatMatrix g = gram(fam.functional, fam.slices[n], fam.slices[m]);
                return compare_matrices("orthogonality", {{"n", n}, {"m", m}}, g,
                                        RatMatrix::zero(g.rows(), g.cols()));
            }));
    }
    return out;
}

/// Entry k of slice n carries only monomials x^a y^b with a = n-k and b = k mod 2.
inline bool has_parity_structure(const PolyVector& slice, int n) {
    for (int k = 0; k < static_cast<int>(slice.size()); ++k)
        for (const auto& [e, c] : slice[k].terms())
            if ((e.first - (n - k)) % 2 != 0 || (e.second - k) % 2 != 0) return false;
    return true;
}

/*
 * Rebuilds S_0..S_N of an xy-symmetric family from its Gamma matrices alone:
 * rows 0..n of S_{n+1} come from the x-relation, the last row from the y-relation.
 */
inline std::vector<PolyVector> rebuild_from_gammas(const MopsFamily& fam, int max_degree) {
    std::vector<PolyVector> s{{Polynomial(1)}};
    for (int n = 0; n < max_degree; ++n) {
        const PolyVector& prev = n == 0 ? PolyVector{} : s[n - 1];
        PolyVector from_x = Polynomial::x() * s[n] - symmetric_gamma(fam, n, 1) * prev;
        PolyVector from_y = Polynomial::y() * s[n] - symmetric_gamma(fam, n, 2) * prev;
        from_x.push_back(from_y.back());
        s.push_back(std::move(from_x));
    }
    return s;
}

} // namespace bimops
