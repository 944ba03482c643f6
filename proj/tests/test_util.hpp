#pragma once

#include <bimops/polynomial.hpp>
#include <bimops/rational.hpp>

#include <bimops/matrix.hpp>

#include <initializer_list>
#include <ostream>
#include <random>
#include <string>
#include <tuple>

namespace bimops::testing {

inline Rational q(long p, long d = 1) { return frac(p, d); }
inline Rational q(int p) { return frac(p, 1); }

inline Rational q(const char* s) { return parse_rational(s); }

/// poly({{2, 0, q(1)}, {0, 0, q(-1, 3)}}) == x^2 - 1/3.
inline Polynomial poly(std::initializer_list<std::tuple<int, int, Rational>> terms) {
    Polynomial p;
    for (const auto& [i, j, c] : terms) p.add_term(i, j, c);
    return p;
}

/// Small random rationals num/den with |num| <= range, 1 <= den <= range.
struct RationalGen {
    std::mt19937 rng;
    int range;

    explicit RationalGen(unsigned seed, int range = 9) : rng(seed), range(range) {}

    Rational operator()() {
        std::uniform_int_distribution<int> num(-range, range), den(1, range);
        return frac(num(rng), den(rng));
    }

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
};

} // namespace bimops::testing

namespace bimops {

// Readable gtest output for exact values.
inline void PrintTo(const RatMatrix& m, std::ostream* os) {
    *os << m.shape() << " [";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        *os << (r ? "; " : "");
        for (std::size_t c = 0; c < m.cols(); ++c) *os << (c ? " " : "") << m(r, c).get_str();
    }
    *os << "]";
}

inline void PrintTo(const Polynomial& p, std::ostream* os) { *os << p.to_string(); }

} // namespace bimops
