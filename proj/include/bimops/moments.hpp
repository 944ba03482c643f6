#pragma once

#include <bimops/errors.hpp>
#include <bimops/matrix.hpp>
#include <bimops/polynomial.hpp>
#include <bimops/rational.hpp>

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bimops {

enum class Symmetry { none, x_symmetric, y_symmetric, xy_symmetric };

inline const char* to_string(Symmetry s) {
    switch (s) {
    case Symmetry::x_symmetric: return "x-symmetric";
    case Symmetry::y_symmetric: return "y-symmetric";
    case Symmetry::xy_symmetric: return "xy-symmetric";
    default: return "none";
    }
}

/*
 * A weight, known only through its normalized moments mu(h,k) / mu(0,0).
 *
 * Monic orthogonal systems do not change under positive rescaling of the
 * functional, so transcendental common factors (pi for the disk, Beta
 * functions for the simplex) never need to be represented.
 *
 * Copies share one memo table. The oracle receives the functional itself so
 * that recurrences can be written in terms of already memoized moments.
 */
class MomentFunctional {
public:
    using Oracle = std::function<Rational(const MomentFunctional& self, int h, int k)>;

    MomentFunctional(std::string description, Symmetry symmetry, Oracle oracle)
        : state_(std::make_shared<State>(std::move(description), symmetry, std::move(oracle))) {}

    const std::string& description() const noexcept { return state_->description; }
    Symmetry symmetry() const noexcept { return state_->symmetry; }
    bool is_xy_symmetric() const noexcept { return state_->symmetry == Symmetry::xy_symmetric; }

    Rational moment(int h, int k) const {
        if (h < 0 || k < 0) throw std::invalid_argument("negative moment index");
        const Symmetry s = state_->symmetry;
        if ((h % 2 != 0 && (s == Symmetry::x_symmetric || s == Symmetry::xy_symmetric)) ||
            (k % 2 != 0 && (s == Symmetry::y_symmetric || s == Symmetry::xy_symmetric)))
            return 0;
        {
            std::lock_guard lock(state_->mutex);
            auto it = state_->memo.find({h, k});
            if (it != state_->memo.end()) return it->second;
        }
        // Computed outside the lock: the oracle may recurse into this functional.
        Rational value = state_->oracle(*this, h, k);
        std::lock_guard lock(state_->mutex);
        return state_->memo.try_emplace({h, k}, std::move(value)).first->second;
    }

    /// The functional applied to a polynomial.
    Rational apply(const Polynomial& p) const {
        Rational sum;
        for (const auto& [e, c] : p.terms()) sum += c * moment(e.first, e.second);
        return sum;
    }

    /// The functional applied to p * q, without forming the product.
    Rational apply_product(const Polynomial& p, const Polynomial& q) const {
        Rational sum;
        for (const auto& [ea, ca] : p.terms())
            for (const auto& [eb, cb] : q.terms()) sum += ca * cb * moment(ea.first + eb.first, ea.second + eb.second);
        return sum;
    }

private:
    struct State {
        State(std::string d, Symmetry s, Oracle o) : description(std::move(d)), symmetry(s), oracle(std::move(o)) {}
        std::string description;
        Symmetry symmetry;
        Oracle oracle;
        std::mutex mutex;
        std::map<Exponent, Rational> memo;
    };
    std::shared_ptr<State> state_;
};

// ---------------------------------------------------------------------------
// Built-in weights
// ---------------------------------------------------------------------------

/// Uniform weight on [-1,1]^2: mu(h,k) = 1/((h+1)(k+1)) for even h, k.
inline MomentFunctional square_legendre() {
    return MomentFunctional("square-legendre", Symmetry::xy_symmetric, [](const MomentFunctional&, int h, int k) -> Rational {
        return Rational(1) / Rational((h + 1) * (k + 1));
    });
}

/*
 * (1 - x^2 - y^2)^mu on the unit disk, through polar coordinates.
 *
 * mu(2h,2k) ~ R(h+k) * A(h,k) with the radial factor
 * R(m) = int_0^1 r^{2m+1} (1-r^2)^mu dr and the angular factor
 * A(h,k) = int_0^{2pi} cos^{2h} sin^{2k}. Their one-step ratios are
 * R(m)/R(m-1) = m/(m+mu+1), A(h,k)/A(h-1,k) = (2h-1)/(2h+2k) and
 * A(h,k)/A(h,k-1) = (2k-1)/(2h+2k).
 */
inline MomentFunctional ball(const Rational& mu) {
    if (mu <= -1) throw std::invalid_argument("ball parameter mu must exceed -1");
    return MomentFunctional("ball mu=" + mu.get_str(), Symmetry::xy_symmetric,
                            [mu](const MomentFunctional& self, int h2, int k2) -> Rational {
                                const int h = h2 / 2, k = k2 / 2, m = h + k;
                                if (m == 0) return 1;
                                const Rational radial = Rational(m) / (Rational(m) + mu + 1);
                                if (h > 0)
                                    return self.moment(h2 - 2, k2) * radial * frac(2 * h - 1, 2 * m);
                                return self.moment(h2, k2 - 2) * radial * frac(2 * k - 1, 2 * m);
                            });
}

/*
 * u^a v^b (1-u-v)^c on the triangle u, v >= 0, u + v <= 1, through the
 * Dirichlet integral Gamma(h+a+1) Gamma(k+b+1) Gamma(c+1) / Gamma(h+k+a+b+c+3).
 */
inline MomentFunctional simplex(const Rational& a, const Rational& b, const Rational& c) {
    if (a <= -1 || b <= -1 || c <= -1) throw std::invalid_argument("simplex parameters must exceed -1");
    const Rational s = a + b + c;
    return MomentFunctional("simplex a=" + a.get_str() + " b=" + b.get_str() + " c=" + c.get_str(), Symmetry::none,
                            [a, b, s](const MomentFunctional& self, int h, int k) -> Rational {
                                if (h == 0 && k == 0) return 1;
                                const Rational top = Rational(h + k) + s + 2;
                                if (h > 0) return self.moment(h - 1, k) * (Rational(h) + a) / top;
                                return self.moment(h, k - 1) * (Rational(k) + b) / top;
                            });
}

/// Explicit moment table; entries are normalized by the (0,0) entry.
inline MomentFunctional custom_moments(const std::map<Exponent, Rational>& table,
                                       std::optional<Symmetry> symmetry = std::nullopt) {
    auto it = table.find({0, 0});
    if (it == table.end()) throw MomentUnavailable(0, 0);
    const Rational mass = it->second;
    if (mass <= 0) throw NonPositiveMass("custom moment table has mu(0,0) <= 0");
    if (!symmetry) {
        bool xs = true, ys = true;
        for (const auto& [e, v] : table) {
            if (sgn(v) == 0) continue;
            if (e.first % 2 != 0) xs = false;
            if (e.second % 2 != 0) ys = false;
        }
        symmetry = xs && ys ? Symmetry::xy_symmetric
                 : xs       ? Symmetry::x_symmetric
                 : ys       ? Symmetry::y_symmetric
                            : Symmetry::none;
    }
    auto shared = std::make_shared<const std::map<Exponent, Rational>>(table);
    return MomentFunctional("custom", *symmetry, [shared, mass](const MomentFunctional&, int h, int k) -> Rational {
        auto found = shared->find({h, k});
        if (found == shared->end()) throw MomentUnavailable(h, k);
        return found->second / mass;
    });
}

// ---------------------------------------------------------------------------
// Transformations
// ---------------------------------------------------------------------------

/// Moments of (a x + b y) W, renormalized to mass one.
inline MomentFunctional christoffel(const MomentFunctional& f, const Rational& a, const Rational& b) {
    if (sgn(a) == 0 && sgn(b) == 0) throw std::invalid_argument("christoffel: a and b both zero");
    const Rational mass = a * f.moment(1, 0) + b * f.moment(0, 1);
    if (mass <= 0)
        throw NonPositiveMass("christoffel: (" + a.get_str() + ")x + (" + b.get_str() + ")y has mass " +
                              mass.get_str() + " under " + f.description());
    // x W keeps y-symmetry, y W keeps x-symmetry.
    Symmetry sym = Symmetry::none;
    const bool fx = f.symmetry() == Symmetry::x_symmetric || f.is_xy_symmetric();
    const bool fy = f.symmetry() == Symmetry::y_symmetric || f.is_xy_symmetric();
    if (sgn(b) == 0 && fy) sym = Symmetry::y_symmetric;
    if (sgn(a) == 0 && fx) sym = Symmetry::x_symmetric;
    std::string label = "(" + a.get_str() + "x+" + b.get_str() + "y)*[" + f.description() + "]";
    return MomentFunctional(std::move(label), sym, [f, a, b, mass](const MomentFunctional&, int h, int k) -> Rational {
        Rational v;
        if (sgn(a) != 0) v += a * f.moment(h + 1, k);
        if (sgn(b) != 0) v += b * f.moment(h, k + 1);
        return Rational(v / mass);
    });
}

/// Moments of W^{(i,j)}(u,v) under u = x^2, v = y^2: mu_F(2h+2i, 2k+2j) / mu_F(2i, 2j).
inline MomentFunctional quad_pushforward(const MomentFunctional& f, int i, int j) {
    if ((i != 0 && i != 1) || (j != 0 && j != 1)) throw std::invalid_argument("quad_pushforward: i, j must be 0 or 1");
    if (!f.is_xy_symmetric()) throw NotSymmetric("quad_pushforward needs an xy-symmetric functional, got " +
                                                 f.description() + " (" + to_string(f.symmetry()) + ")");
    const Rational mass = f.moment(2 * i, 2 * j);
    if (mass <= 0) throw NonPositiveMass("quad_pushforward: mu(2i,2j) <= 0 for " + f.description());
    std::string label = "W^(" + std::to_string(i) + "," + std::to_string(j) + ")[" + f.description() + "]";
    return MomentFunctional(std::move(label), Symmetry::none, [f, i, j, mass](const MomentFunctional&, int h, int k) -> Rational {
        return Rational(f.moment(2 * h + 2 * i, 2 * k + 2 * j) / mass);
    });
}

/// Moments of 4|x||y| G(x^2, y^2): even-even moments copied from G, the rest zero.
inline MomentFunctional quad_pullback(const MomentFunctional& g) {
    return MomentFunctional("pullback[" + g.description() + "]", Symmetry::xy_symmetric,
                            [g](const MomentFunctional&, int h, int k) -> Rational { return g.moment(h / 2, k / 2); });
}

// ---------------------------------------------------------------------------
// Gram matrices
// ---------------------------------------------------------------------------

/// Row-major polynomial matrix; every row has the same length.
using PolyMatrix = std::vector<PolyVector>;

/// (A, B) = F(A B^T) for an h x m matrix A and an l x m matrix B.
inline RatMatrix gram(const MomentFunctional& f, const PolyMatrix& a, const PolyMatrix& b) {
    const std::size_t m = a.empty() ? (b.empty() ? 0 : b.front().size()) : a.front().size();
    for (const auto& row : a)
        if (row.size() != m) throw std::invalid_argument("gram: ragged or mismatched polynomial matrices");
    for (const auto& row : b)
        if (row.size() != m) throw std::invalid_argument("gram: ragged or mismatched polynomial matrices");
    RatMatrix g(a.size(), b.size());
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t s = 0; s < b.size(); ++s)
            for (std::size_t c = 0; c < m; ++c) g(r, s) += f.apply_product(a[r][c], b[s][c]);
    return g;
}

/// Column-vector case: p x 1 against q x 1 gives p x q.
inline RatMatrix gram(const MomentFunctional& f, const PolyVector& a, const PolyVector& b) {
    RatMatrix g(a.size(), b.size());
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t s = 0; s < b.size(); ++s) g(r, s) = f.apply_product(a[r], b[s]);
    return g;
}

// ---------------------------------------------------------------------------
// Weight specification
// ---------------------------------------------------------------------------

enum class WeightFamily { square_legendre, ball, simplex, custom };

inline const char* to_string(WeightFamily f) {
    switch (f) {
    case WeightFamily::ball: return "ball";
    case WeightFamily::simplex: return "simplex";
    case WeightFamily::custom: return "custom";
    default: return "square-legendre";
    }
}

struct WeightSpec {
    WeightFamily family = WeightFamily::square_legendre;
    Rational mu = 0;
    Rational a = 0;
    Rational b = 0;
    Rational c = 0;
    std::map<Exponent, Rational> moments;

    friend bool operator==(const WeightSpec&, const WeightSpec&) = default;
};

inline MomentFunctional make_functional(const WeightSpec& spec) {
    switch (spec.family) {
    case WeightFamily::ball: return ball(spec.mu);
    case WeightFamily::simplex: return simplex(spec.a, spec.b, spec.c);
    case WeightFamily::custom: return custom_moments(spec.moments);
    default: return square_legendre();
    }
}

} // namespace bimops
