#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace srs {

/// Exact rational scalar used for all probabilities and variable values.
/// Arbitrary-precision, always stored in lowest terms with a positive
/// denominator; equality is exact.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Renders a rational as "p/q", or plain "p" when the denominator is 1.
inline std::string format_rational(const Rational& r) {
    if (denominator(r) == 1) {
        return numerator(r).str();
    }
    return numerator(r).str() + "/" + denominator(r).str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    return true;
}

// Parses "p" or "p/q" with an optional leading '-' on p only.
// q must be a bare positive integer: a negative or zero denominator is
// rejected rather than normalized away.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
    std::string_view num = text;
    std::string_view den;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
        if (!all_digits(den)) {
            return std::nullopt;
        }
    }
    bool negative = false;
    if (!num.empty() && num.front() == '-') {
        negative = true;
        num.remove_prefix(1);
    }
    if (!all_digits(num)) {
        return std::nullopt;
    }
    Integer p{std::string(num)};
    if (negative) {
        p = -p;
    }
    Integer q = den.empty() ? Integer(1) : Integer{std::string(den)};
    if (q == 0) {
        return std::nullopt;
    }
    return Rational(p, q);
}

}  // namespace detail

/// Parses a rational from "p/q" or integer text. Throws std::invalid_argument
/// on malformed input, a zero denominator, or a negative denominator.
inline Rational parse_rational(std::string_view text) {
    auto r = detail::try_parse_rational(text);
    if (!r) {
        throw std::invalid_argument("invalid rational literal: \"" + std::string(text) + "\"");
    }
    return *r;
}

/// Floor of a non-negative rational as an unsigned machine word.
inline std::uint64_t floor_to_uint64(const Rational& r) {
    if (r < 0) {
        throw std::domain_error("floor_to_uint64 requires a non-negative value");
    }
    Integer fl = numerator(r) / denominator(r);
    return fl.convert_to<std::uint64_t>();
}

}  // namespace srs
