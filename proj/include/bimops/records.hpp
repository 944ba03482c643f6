#pragma once

#include <bimops/matrix.hpp>
#include <bimops/polynomial.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bimops {

/// Outcome of checking one identity at one index tuple.
struct IdentityRecord {
    std::string identity;
    std::vector<std::pair<std::string, int>> indices;
    bool passed = false;
    /// Free-text reason on failure (error message, shape mismatch...).
    std::string detail;
    /// Exact difference (lhs - rhs) when the failure is a coefficient mismatch.
    std::optional<RatMatrix> witness;

    friend bool operator==(const IdentityRecord&, const IdentityRecord&) = default;
};

using IdentityRecords = std::vector<IdentityRecord>;

inline bool all_passed(const IdentityRecords& records) {
    for (const auto& r : records)
        if (!r.passed) return false;
    return true;
}

/// Runs `check`, turning any exception into a failed record for the same identity.
template <class Check>
IdentityRecord guarded(const std::string& identity, const std::vector<std::pair<std::string, int>>& indices,
                       Check&& check) {
    try {
        return check();
    } catch (const std::exception& e) {
        return {identity, indices, false, e.what(), std::nullopt};
    }
}

/// Compares two matrices exactly and produces a record carrying the difference on failure.
inline IdentityRecord compare_matrices(std::string identity, std::vector<std::pair<std::string, int>> indices,
                                       const RatMatrix& lhs, const RatMatrix& rhs) {
    IdentityRecord rec{std::move(identity), std::move(indices), false, {}, std::nullopt};
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
        rec.detail = "shape mismatch: " + lhs.shape() + " vs " + rhs.shape();
        return rec;
    }
    RatMatrix diff = lhs - rhs;
    rec.passed = diff.is_zero();
    if (!rec.passed) {
        rec.detail = "nonzero difference";
        rec.witness = std::move(diff);
    }
    return rec;
}

/// Exact polynomial-vector identity; on failure the detail lists every nonzero entry of lhs - rhs.
inline IdentityRecord compare_vectors(std::string identity, std::vector<std::pair<std::string, int>> indices,
                                      const PolyVector& lhs, const PolyVector& rhs) {
    IdentityRecord rec{std::move(identity), std::move(indices), false, {}, std::nullopt};
    if (lhs.size() != rhs.size()) {
        rec.detail = "length mismatch: " + std::to_string(lhs.size()) + " vs " + std::to_string(rhs.size());
        return rec;
    }
    std::string diff;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        Polynomial d = lhs[i] - rhs[i];
        if (!d.is_zero()) diff += (diff.empty() ? "" : "; ") + std::string("entry ") + std::to_string(i) + ": " + d.to_string();
    }
    rec.passed = diff.empty();
    if (!rec.passed) rec.detail = "lhs - rhs nonzero: " + diff;
    return rec;
}

} // namespace bimops
