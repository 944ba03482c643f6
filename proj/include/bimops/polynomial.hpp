#pragma once

#include <bimops/matrix.hpp>
#include <bimops/rational.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bimops {

/// Exponent pair (x-exponent, y-exponent).
using Exponent = std::pair<int, int>;

/*
 * Sparse bivariate polynomial with exact coefficients.
 *
 * No zero coefficient is ever stored, so equality is structural and the zero
 * polynomial is the empty map (degree -1).
 */
class Polynomial {
public:
    using Terms = std::map<Exponent, Rational>;

    Polynomial() = default;
    Polynomial(const Rational& c) { add_term(0, 0, c); } // NOLINT: constants convert implicitly
    Polynomial(int c) : Polynomial(Rational(c)) {}       // NOLINT

    static Polynomial monomial(int i, int j, const Rational& c = 1) {
        Polynomial p;
        p.add_term(i, j, c);
        return p;
    }
    static Polynomial x() { return monomial(1, 0); }
    static Polynomial y() { return monomial(0, 1); }
    /// x (k = 1) or y (k = 2).
    static Polynomial variable(int k) { return k == 1 ? x() : y(); }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
        return d;
    }

    Rational coefficient(int i, int j) const {
        auto it = terms_.find({i, j});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(int i, int j, const Rational& c) {
        if (i < 0 || j < 0) throw std::invalid_argument("negative exponent");
        if (sgn(c) == 0) return;
        auto [it, inserted] = terms_.try_emplace({i, j}, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [e, c] : o.terms_) add_term(e.first, e.second, -c);
        return *this;
    }
    Polynomial& operator*=(const Rational& s) {
        if (sgn(s) == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial p;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) p.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
        return p;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Multiplies by x^i y^j.
    Polynomial shifted(int i, int j) const {
        Polynomial p;
        for (const auto& [e, c] : terms_) p.terms_.emplace(Exponent{e.first + i, e.second + j}, c);
        return p;
    }

    /// Exact division by x^i y^j; nullopt when a term is not divisible.
    std::optional<Polynomial> divided_by_monomial(int i, int j) const {
        Polynomial p;
        for (const auto& [e, c] : terms_) {
            if (e.first < i || e.second < j) return std::nullopt;
            p.terms_.emplace(Exponent{e.first - i, e.second - j}, c);
        }
        return p;
    }

    /// p(x, y) -> p(x^2, y^2).
    Polynomial squared_arguments() const {
        Polynomial p;
        for (const auto& [e, c] : terms_) p.terms_.emplace(Exponent{2 * e.first, 2 * e.second}, c);
        return p;
    }

    /// Inverse of squared_arguments; nullopt when some exponent is odd.
    std::optional<Polynomial> halved_exponents() const {
        Polynomial p;
        for (const auto& [e, c] : terms_) {
            if (e.first % 2 != 0 || e.second % 2 != 0) return std::nullopt;
            p.terms_.emplace(Exponent{e.first / 2, e.second / 2}, c);
        }
        return p;
    }

    /// Human-readable form in the given variable names, highest degree first.
    std::string to_string(const char* xv = "x", const char* yv = "y") const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        const auto terms = ordered();
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            const auto& [e, c] = **it;
            Rational mag = abs(c);
            os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
            const bool unit = mag == 1 && (e.first || e.second);
            if (!unit) os << mag.get_str();
            if (e.first) os << (unit ? "" : "*") << xv << (e.first > 1 ? "^" + std::to_string(e.first) : "");
            if (e.second)
                os << ((unit && !e.first) ? "" : "*") << yv << (e.second > 1 ? "^" + std::to_string(e.second) : "");
            first = false;
        }
        return os.str();
    }

    /// LaTeX form, highest degree first, fractions as \frac.
    std::string to_latex(const char* xv = "x", const char* yv = "y") const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        const auto terms = ordered();
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            const auto& [e, c] = **it;
            Rational mag = abs(c);
            os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
            const bool has_var = e.first || e.second;
            if (!(mag == 1 && has_var)) {
                if (mag.get_den() == 1)
                    os << mag.get_num().get_str();
                else
                    os << "\\frac{" << mag.get_num().get_str() << "}{" << mag.get_den().get_str() << "}";
            }
            if (e.first) os << xv << (e.first > 1 ? "^{" + std::to_string(e.first) + "}" : "");
            if (e.second) os << yv << (e.second > 1 ? "^{" + std::to_string(e.second) + "}" : "");
            first = false;
        }
        return os.str();
    }

private:
    // Terms sorted by (total degree, y-exponent) so printing reads like x^n y^0 ... first.
    std::vector<const Terms::value_type*> ordered() const {
        std::vector<const Terms::value_type*> v;
        for (const auto& t : terms_) v.push_back(&t);
        std::sort(v.begin(), v.end(), [](auto* a, auto* b) {
            const int da = a->first.first + a->first.second, db = b->first.first + b->first.second;
            if (da != db) return da < db;
            return a->first.second > b->first.second;
        });
        return v;
    }

    Terms terms_;
};

/// Column vector of polynomials (a degree slice, or a zero-interleaved big vector).
using PolyVector = std::vector<Polynomial>;

/// The canonical monomial vector [x^n, x^{n-1} y, ..., y^n].
inline PolyVector monomial_vector(int n) {
    PolyVector v;
    for (int j = 0; j <= n; ++j) v.push_back(Polynomial::monomial(n - j, j));
    return v;
}

/// Monomial basis of polynomials of total degree < n, graded, x^{d-j} y^j within degree d.
inline std::vector<Exponent> monomials_below(int n) {
    std::vector<Exponent> out;
    for (int d = 0; d < n; ++d)
        for (int j = 0; j <= d; ++j) out.emplace_back(d - j, j);
    return out;
}

inline PolyVector operator*(const RatMatrix& m, const PolyVector& v) {
    if (m.cols() != v.size())
        throw std::invalid_argument("matrix-vector shape mismatch: " + m.shape() + " * " + std::to_string(v.size()));
    PolyVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (sgn(m(r, c)) != 0) out[r] += v[c] * m(r, c);
    return out;
}

inline PolyVector operator+(PolyVector a, const PolyVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector sum size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline PolyVector operator-(PolyVector a, const PolyVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector difference size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline PolyVector operator*(const Polynomial& s, const PolyVector& v) {
    PolyVector out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back(s * p);
    return out;
}

inline PolyVector shifted(const PolyVector& v, int i, int j) {
    PolyVector out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back(p.shifted(i, j));
    return out;
}

inline PolyVector squared_arguments(const PolyVector& v) {
    PolyVector out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back(p.squared_arguments());
    return out;
}

inline bool is_zero(const PolyVector& v) {
    for (const auto& p : v)
        if (!p.is_zero()) return false;
    return true;
}

/// Entry j has leading part exactly x^{n-j} y^j and every other term has lower total degree.
inline bool is_monic_slice(const PolyVector& v, int n) {
    if (v.size() != static_cast<std::size_t>(n + 1)) return false;
    for (int j = 0; j <= n; ++j) {
        if (v[j].coefficient(n - j, j) != 1) return false;
        for (const auto& [e, c] : v[j].terms()) {
            if (e.first + e.second > n) return false;
            if (e.first + e.second == n && e != Exponent{n - j, j}) return false;
        }
    }
    return true;
}

} // namespace bimops
