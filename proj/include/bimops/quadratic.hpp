#pragma once

#include <bimops/errors.hpp>
#include <bimops/moments.hpp>
#include <bimops/mops.hpp>
#include <bimops/polynomial.hpp>
#include <bimops/records.hpp>
#include <bimops/structmat.hpp>

#include <string>
#include <utility>
#include <vector>

namespace bimops {

struct ZipSplit {
    PolyVector even; // odd slots zeroed
    PolyVector odd;  // even slots zeroed
};

inline ZipSplit zip_split(const PolyVector& v) {
    ZipSplit out{v, v};
    for (std::size_t i = 0; i < v.size(); ++i) (i % 2 == 0 ? out.odd : out.even)[i] = Polynomial();
    return out;
}

/// Length of the big vector of family (i,j) at degree n (clamped to 0 below n = -1).
inline std::size_t big_length(int n, int i, int j) { return static_cast<std::size_t>(std::max(0, 2 * n + 1 + i + j)); }

/*
 * Big family (i,j) in the variables (u,v): slice n has 2n+1+i+j entries, the
 * nonzero ones sitting at slots 2h+j, so that J_n^{(i,j)} picks them out.
 */
struct BigFamily {
    int i = 0, j = 0;
    std::vector<PolyVector> slices;

    int max_degree() const noexcept { return static_cast<int>(slices.size()) - 1; }

    /// Slice n; the zero vector of length max(0, 2n+1+i+j) for n < 0.
    PolyVector slice(int n) const {
        if (n < 0) return PolyVector(big_length(n, i, j));
        if (n > max_degree())
            throw InsufficientDepth("big family (" + std::to_string(i) + "," + std::to_string(j) + "): slice " +
                                    std::to_string(n) + " requested, built to " + std::to_string(max_degree()));
        return slices[n];
    }
};

/// Inflates a small slice with J^T: entry h goes to slot 2h+j.
inline PolyVector inflate(const PolyVector& small, int n, int i, int j) {
    return j_matrix(n, i, j).transpose() * small;
}

/// Factor carried by the parity class (i,j) inside the symmetric family: 1, y, x, xy.
inline Polynomial parity_factor(int i, int j) { return Polynomial::monomial(i, j); }

struct QuadDecomposition {
    MopsFamily symmetric;
    /// Small families indexed by 2i + j.
    std::vector<MopsFamily> small;
    std::vector<BigFamily> big;
    /// Highest small degree present in every small and big family.
    int half_degree = 0;

    const MopsFamily& small_family(int i, int j) const { return small.at(2 * i + j); }
    const BigFamily& big_family(int i, int j) const { return big.at(2 * i + j); }
};

namespace detail {

inline std::string pair_name(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

/// x^i y^j P(x^2, y^2) -> P(u, v), slot by slot.
inline PolyVector strip_factor(const PolyVector& v, int i, int j, const std::string& where) {
    PolyVector out;
    out.reserve(v.size());
    for (std::size_t s = 0; s < v.size(); ++s) {
        auto divided = v[s].divided_by_monomial(i, j);
        std::optional<Polynomial> halved = divided ? divided->halved_exponents() : std::nullopt;
        if (!halved)
            throw DecompositionMismatch(where + " entry " + std::to_string(s) + " (" + v[s].to_string() +
                                        ") is not x^" + std::to_string(i) + " y^" + std::to_string(j) +
                                        " times a polynomial in x^2, y^2");
        out.push_back(std::move(*halved));
    }
    return out;
}

/// Big slice n of family (i,j), read from the symmetric family.
inline PolyVector extract_big(const MopsFamily& sym, int n, int i, int j) {
    const std::string where = "S_" + std::to_string(2 * n + i + j) + " class " + pair_name(i, j);
    if (i == j) {
        // (0,0): even slots of S_{2n}; (1,1): odd slots of S_{2n+2}.
        const ZipSplit z = zip_split(sym.slice(2 * n + 2 * i));
        return strip_factor(i == 0 ? z.even : z.odd, i, j, where);
    }
    const ZipSplit z = zip_split(sym.slice(2 * n + 1));
    return strip_factor(i == 1 ? z.even : z.odd, i, j, where);
}

inline MomentFunctional small_weight(const MomentFunctional& g, int i, int j) {
    if (i == 0 && j == 0) return g;
    if (i == 1 && j == 1) return christoffel(christoffel(g, 1, 0), 0, 1);
    return christoffel(g, i, j);
}

} // namespace detail

/*
 * Splits an xy-symmetric family into the four big and small families up to
 * small degree N. Needs the symmetric family to degree 2N+2: family (1,1) at
 * degree N lives in S_{2N+2}. Every extracted small slice must coincide with
 * the independently built MOPS of the matching pushforward.
 */
inline QuadDecomposition decompose(const MopsFamily& symfam, int max_small_degree) {
    const int N = max_small_degree;
    if (N < 0) throw std::invalid_argument("decompose: negative degree");
    if (!symfam.functional.is_xy_symmetric())
        throw NotSymmetric("decompose: " + symfam.label + " is not xy-symmetric");
    if (symfam.max_degree() < 2 * N + 2)
        throw InsufficientDepth("decompose: small degree " + std::to_string(N) + " needs the symmetric family to degree " +
                                std::to_string(2 * N + 2) + ", have " + std::to_string(symfam.max_degree()));
    QuadDecomposition out{symfam, {}, {}, N};
    for (int i = 0; i <= 1; ++i)
        for (int j = 0; j <= 1; ++j) {
            BigFamily big{i, j, {}};
            std::vector<PolyVector> shrunk;
            for (int n = 0; n <= N; ++n) {
                big.slices.push_back(detail::extract_big(symfam, n, i, j));
                shrunk.push_back(j_matrix(n, i, j) * big.slices.back());
            }
            const MomentFunctional g = quad_pushforward(symfam.functional, i, j);
            MopsFamily reference = build_mops(g, N, "pushforward " + detail::pair_name(i, j) + " of " + symfam.label);
            for (int n = 0; n <= N; ++n) {
                if (shrunk[n] != reference.slices[n])
                    throw DecompositionMismatch("small family " + detail::pair_name(i, j) + " degree " +
                                                std::to_string(n) + " differs from the MOPS of its pushforward");
                // The big slice must be exactly the inflated small slice (zeros elsewhere).
                if (big.slices[n] != inflate(reference.slices[n], n, i, j))
                    throw DecompositionMismatch("big family " + detail::pair_name(i, j) + " degree " +
                                                std::to_string(n) + " has nonzero entries outside its slots");
            }
            out.small.push_back(std::move(reference));
            out.big.push_back(std::move(big));
        }
    return out;
}

/// Gram matrix of x^i y^j P(x^2, y^2) under the symmetric functional, scaled to the pushforward's mass.
inline RatMatrix big_gram(const QuadDecomposition& d, int n, int i, int j) {
    const PolyVector lifted = parity_factor(i, j) * squared_arguments(d.big_family(i, j).slice(n));
    return gram(d.symmetric.functional, lifted, lifted) * (Rational(1) / d.symmetric.functional.moment(2 * i, 2 * j));
}

/// Reconstruction, shrink and Gram identities of a decomposition, one record per identity and index.
inline IdentityRecords verify_decomposition(const QuadDecomposition& d) {
    IdentityRecords out;
    const int N = d.half_degree;
    auto big = [&](int n, int i, int j) { return squared_arguments(d.big_family(i, j).slice(n)); };
    for (int n = 0; 2 * n <= d.symmetric.max_degree() && n <= N; ++n)
        out.push_back(guarded("reconstruction_even", {{"n", n}}, [&] {
            return compare_vectors("reconstruction_even", {{"n", n}}, d.symmetric.slice(2 * n),
                                   big(n, 0, 0) + Polynomial::monomial(1, 1) * big(n - 1, 1, 1));
        }));
    for (int n = 0; 2 * n + 1 <= d.symmetric.max_degree() && n <= N; ++n)
        out.push_back(guarded("reconstruction_odd", {{"n", n}}, [&] {
            return compare_vectors("reconstruction_odd", {{"n", n}}, d.symmetric.slice(2 * n + 1),
                                   Polynomial::x() * big(n, 1, 0) + Polynomial::y() * big(n, 0, 1));
        }));
    for (int n = 0; n <= d.symmetric.max_degree(); ++n) {
        IdentityRecord rec{"parity_classes", {{"n", n}}, has_parity_structure(d.symmetric.slice(n), n), {}, std::nullopt};
        if (!rec.passed) rec.detail = "slice entries do not carry the factors 1, xy, x, y by parity";
        out.push_back(std::move(rec));
    }
    for (int i = 0; i <= 1; ++i)
        for (int j = 0; j <= 1; ++j)
            for (int n = 0; n <= N; ++n) {
                const std::vector<std::pair<std::string, int>> idx{{"i", i}, {"j", j}, {"n", n}};
                out.push_back(guarded("shrink", idx, [&] {
                    return compare_vectors("shrink", idx, j_matrix(n, i, j) * d.big_family(i, j).slice(n),
                                           d.small_family(i, j).slice(n));
                }));
                out.push_back(guarded("gram_shrink", idx, [&] {
                    const RatMatrix jm = j_matrix(n, i, j);
                    const RatMatrix g = big_gram(d, n, i, j);
                    // Zero slots give zero rows and columns; J keeps exactly the rest.
                    const RatMatrix back = jm.transpose() * (jm * g * jm.transpose()) * jm;
                    IdentityRecord rec = compare_matrices("gram_shrink", idx, jm * g * jm.transpose(),
                                                          d.small_family(i, j).gram_at(n));
                    if (rec.passed && back != g) {
                        rec.passed = false;
                        rec.detail = "big Gram matrix is nonzero outside the selected slots";
                        rec.witness = g - back;
                    }
                    return rec;
                }));
            }
    return out;
}

/*
 * Builds the symmetric MOPS of the pullback of G up to degree N from the
 * four small MOPS of G, xG, yG and xyG (degree ceil(N/2)), then checks it
 * is orthogonal under the pullback.
 */
inline QuadDecomposition assemble_symmetric(const MomentFunctional& g, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("assemble_symmetric: negative degree");
    const int half = (max_degree + 1) / 2;
    static const char* names[] = {"G", "v G", "u G", "u v G"};
    std::vector<MopsFamily> small;
    for (int i = 0; i <= 1; ++i)
        for (int j = 0; j <= 1; ++j) {
            const char* name = names[2 * i + j];
            try {
                small.push_back(build_mops(detail::small_weight(g, i, j), half, std::string(name) + " of " + g.description()));
            } catch (const NotQuasiDefinite& e) {
                throw NotQuasiDefinite(e.degree(), std::string("modification ") + name + ": " + e.what());
            }
        }
    std::vector<BigFamily> big;
    for (int i = 0; i <= 1; ++i)
        for (int j = 0; j <= 1; ++j) {
            BigFamily b{i, j, {}};
            for (int n = 0; n <= half; ++n) b.slices.push_back(inflate(small[2 * i + j].slices[n], n, i, j));
            big.push_back(std::move(b));
        }
    auto lifted = [&](int n, int i, int j) { return squared_arguments(big[2 * i + j].slice(n)); };
    std::vector<PolyVector> slices;
    for (int n = 0; n <= max_degree; ++n) {
        const int m = n / 2;
        if (n % 2 == 0)
            slices.push_back(lifted(m, 0, 0) + Polynomial::monomial(1, 1) * lifted(m - 1, 1, 1));
        else
            slices.push_back(Polynomial::x() * lifted(m, 1, 0) + Polynomial::y() * lifted(m, 0, 1));
    }
    const MomentFunctional f = quad_pullback(g);
    MopsFamily sym = family_from_slices(f, std::move(slices), "pullback of " + g.description());
    for (const auto& rec : verify_orthogonality(sym))
        if (!rec.passed)
            throw DecompositionMismatch("assembled family fails " + rec.identity + " at " +
                                        std::to_string(rec.indices.front().second) + ": " + rec.detail);
    return {std::move(sym), std::move(small), std::move(big), half};
}

// ---------------------------------------------------------------------------
// Ball / simplex case study
// ---------------------------------------------------------------------------

/// One S_{n,k} entry paired with the small-family polynomial it is built from.
struct CaseStudyRow {
    int n = 0, k = 0;
    Polynomial symmetric;
    int i = 0, j = 0;     // parity class; factor x^i y^j
    int small_n = 0, small_k = 0;
    Polynomial small;     // in (u, v)
    std::string weight;   // identified simplex weight

    friend bool operator==(const CaseStudyRow&, const CaseStudyRow&) = default;
};

struct CaseStudyReport {
    Rational mu;
    /// S_{n,k} for n <= 2 max_degree + 1 against the small family it comes from.
    int max_degree = 0;
    IdentityRecords records;
    std::vector<CaseStudyRow> rows;
    std::string note;
};

inline std::string simplex_weight_label(const Rational& a, const Rational& b, const Rational& c) {
    return "u^(" + a.get_str() + ") v^(" + b.get_str() + ") (1-u-v)^(" + c.get_str() + ")";
}

/*
 * Ball weight (1-x^2-y^2)^mu against the simplex weights u^{i-1/2} v^{j-1/2} (1-u-v)^mu:
 * S_{2n,2k}(x,y) = P_{n,k}(x^2,y^2) for n <= N, and each leftover class is the
 * MOPS of its simplex weight.
 */
inline CaseStudyReport xu_case_study(const Rational& mu, int max_degree) {
    const int N = max_degree;
    if (N < 0) throw std::invalid_argument("xu_case_study: negative degree");
    CaseStudyReport report;
    report.mu = mu;
    report.max_degree = N;
    report.note =
        "Weights are compared through normalized moments (mass 1); the Jacobian and constant factors of the "
        "substitution u = x^2, v = y^2 cancel under this normalization.";
    const MopsFamily ballfam = build_mops(ball(mu), 2 * N + 2, "ball mu=" + mu.get_str());
    const Rational half(frac(1, 2));

    const MopsFamily simplexfam = build_mops(simplex(-half, -half, mu), N, "simplex");
    for (int n = 0; n <= N; ++n)
        for (int k = 0; k <= n; ++k) {
            IdentityRecord rec{"xu_identity", {{"n", n}, {"k", k}}, false, {}, std::nullopt};
            const Polynomial lhs = ballfam.slice(2 * n)[2 * k];
            const Polynomial rhs = simplexfam.slice(n)[k].squared_arguments();
            rec.passed = lhs == rhs;
            if (!rec.passed) rec.detail = "S - P(x^2,y^2) = " + (lhs - rhs).to_string();
            report.records.push_back(std::move(rec));
        }

    QuadDecomposition dec = [&] {
        try {
            return decompose(ballfam, N);
        } catch (const std::exception& e) {
            report.records.push_back({"decomposition", {{"N", N}}, false, e.what(), std::nullopt});
            return QuadDecomposition{ballfam, {}, {}, -1};
        }
    }();
    if (dec.half_degree < 0) return report;
    for (auto& rec : verify_decomposition(dec)) report.records.push_back(std::move(rec));

    for (int i = 0; i <= 1; ++i)
        for (int j = 0; j <= 1; ++j) {
            const MomentFunctional w = simplex(Rational(i) - half, Rational(j) - half, mu);
            const MopsFamily tri = build_mops(w, N);
            for (int n = 0; n <= N; ++n) {
                const std::vector<std::pair<std::string, int>> idx{{"i", i}, {"j", j}, {"n", n}};
                report.records.push_back(compare_vectors("simplex_weight", idx, dec.small_family(i, j).slice(n), tri.slice(n)));
            }
            // The extracted family itself, certified orthogonal under the simplex weight.
            std::vector<PolyVector> slices(dec.small_family(i, j).slices.begin(), dec.small_family(i, j).slices.begin() + N + 1);
            for (auto rec : verify_orthogonality(family_from_slices(w, std::move(slices), "simplex"))) {
                rec.identity = "simplex_orthogonality_" + rec.identity;
                rec.indices.insert(rec.indices.begin(), {{"i", i}, {"j", j}});
                report.records.push_back(std::move(rec));
            }
        }

    for (int n = 0; n <= 2 * N + 1; ++n)
        for (int k = 0; k <= n; ++k) {
            CaseStudyRow row;
            row.n = n;
            row.k = k;
            row.symmetric = ballfam.slice(n)[k];
            if (n % 2 == 0) {
                row.i = row.j = k % 2;
                row.small_n = n / 2 - row.i;
            } else {
                row.i = 1 - k % 2;
                row.j = k % 2;
                row.small_n = n / 2;
            }
            row.small_k = k / 2;
            row.small = dec.small_family(row.i, row.j).slice(row.small_n)[row.small_k];
            row.weight = simplex_weight_label(Rational(row.i) - half, Rational(row.j) - half, mu);
            report.rows.push_back(std::move(row));
        }
    return report;
}

} // namespace bimops
