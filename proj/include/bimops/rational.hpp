#pragma once

#include <gmpxx.h>

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bimops {

/// Arbitrary-precision exact rational, always kept in lowest terms.
using Rational = mpq_class;
using Integer = mpz_class;

/// p/q in lowest terms. GMP arithmetic requires canonical operands.
inline Rational frac(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

/// "p/q", or "p" when q == 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses "p", "-p", "p/q" or "-p/q" (decimal digits only, q > 0).
inline Rational parse_rational(std::string_view text) {
    auto bad = [&] { return std::invalid_argument("malformed rational \"" + std::string(text) + "\""); };
    std::size_t pos = 0;
    if (pos < text.size() && text[pos] == '-') ++pos;
    const std::size_t num_begin = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == num_begin) throw bad();
    if (pos < text.size()) {
        if (text[pos] != '/') throw bad();
        const std::size_t den_begin = ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == den_begin || pos != text.size()) throw bad();
        if (text.find_first_not_of('0', den_begin) == std::string_view::npos)
            throw std::invalid_argument("zero denominator in \"" + std::string(text) + "\"");
    }
    Rational r(std::string(text), 10);
    r.canonicalize();
    return r;
}

} // namespace bimops
