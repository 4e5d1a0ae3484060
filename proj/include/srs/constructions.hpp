#pragma once

#include "srs/population.hpp"
#include "srs/rational.hpp"
#include "srs/sampler.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace srs {

/// Half-open generator-output interval [lo, hi) that a digit tuple occupies.
/// For an n-digit tuple the length is exactly N^(-n); the cells of all N^n
/// tuples partition [0, 1).
struct IntervalPreimage {
    Rational lo;
    Rational hi;

    Rational length() const { return hi - lo; }
    bool contains(const Rational& u) const { return lo <= u && u < hi; }

    friend bool operator==(const IntervalPreimage&, const IntervalPreimage&) = default;
};

/// Base-N digits of e, most significant first:
/// e = a_1*N^(n-1) + a_2*N^(n-2) + ... + a_n with each a_i in {0..N-1}.
inline IndexTuple digits_decompose(std::uint64_t e, std::size_t base, std::size_t arity) {
    if (base == 0 || arity == 0) {
        throw std::invalid_argument("digit decomposition needs base >= 1 and arity >= 1");
    }
    auto total = checked_pow(base, arity);
    if (total && e >= *total) {
        throw std::out_of_range("value " + std::to_string(e) + " has no length-" +
                                std::to_string(arity) + " base-" + std::to_string(base) +
                                " expansion");
    }
    IndexTuple digits(arity);
    for (std::size_t i = arity; i-- > 0;) {
        digits[i] = static_cast<std::size_t>(e % base);
        e /= base;
    }
    return digits;
}

/// Inverse of digits_decompose.
inline std::uint64_t digits_recompose(std::span<const std::size_t> digits, std::size_t base) {
    if (base == 0 || digits.empty()) {
        throw std::invalid_argument("digit recomposition needs base >= 1 and arity >= 1");
    }
    std::uint64_t e = 0;
    for (std::size_t d : digits) {
        if (d >= base) {
            throw std::out_of_range("digit " + std::to_string(d) + " out of range for base " +
                                    std::to_string(base));
        }
        e = e * base + d;
    }
    return e;
}

/// First n base-N digits of u in [0, 1), most significant first:
/// a_i = floor(u * N^i) mod N. Terminating expansions are used for dyadic
/// boundary points, so every u lands in exactly one length-n cell.
inline IndexTuple continuous_digits(Rational u, std::size_t base, std::size_t arity) {
    if (base == 0 || arity == 0) {
        throw std::invalid_argument("digit expansion needs base >= 1 and arity >= 1");
    }
    if (u < 0 || u >= 1) {
        throw std::domain_error("generator output must lie in [0, 1), got " +
                                format_rational(u));
    }
    IndexTuple digits(arity);
    for (std::size_t i = 0; i < arity; ++i) {
        u *= Integer(base);
        std::uint64_t digit = floor_to_uint64(u);
        digits[i] = static_cast<std::size_t>(digit);
        u -= Integer(digit);
    }
    return digits;
}

/// Same expansion for u = mantissa / 2^53, in pure 64/128-bit integer
/// arithmetic. Agrees exactly with continuous_digits on that rational.
inline IndexTuple continuous_digits_from_mantissa(std::uint64_t mantissa53, std::size_t base,
                                                  std::size_t arity) {
    if (base == 0 || arity == 0) {
        throw std::invalid_argument("digit expansion needs base >= 1 and arity >= 1");
    }
    constexpr std::uint64_t kDenominatorBits = 53;
    constexpr std::uint64_t kMask = (std::uint64_t(1) << kDenominatorBits) - 1;
    if (mantissa53 > kMask) {
        throw std::domain_error("mantissa must be below 2^53");
    }
    IndexTuple digits(arity);
    std::uint64_t m = mantissa53;
    for (std::size_t i = 0; i < arity; ++i) {
        unsigned __int128 scaled = static_cast<unsigned __int128>(m) * base;
        digits[i] = static_cast<std::size_t>(scaled >> kDenominatorBits);
        m = static_cast<std::uint64_t>(scaled & kMask);
    }
    return digits;
}

/// Cell of u-values whose first n digits equal the given tuple:
/// lo = sum a_i * N^(-i), hi = lo + N^(-n). continuous_digits(u, N, n)
/// equals the tuple iff u lies in [lo, hi).
inline IntervalPreimage tuple_preimage_interval(std::span<const std::size_t> digits,
                                                std::size_t base) {
    if (base == 0 || digits.empty()) {
        throw std::invalid_argument("preimage interval needs base >= 1 and arity >= 1");
    }
    Rational lo = 0;
    Integer scale = 1;
    for (std::size_t d : digits) {
        if (d >= base) {
            throw std::out_of_range("digit " + std::to_string(d) + " out of range for base " +
                                    std::to_string(base));
        }
        scale *= Integer(base);
        lo += Rational(Integer(d), scale);
    }
    return IntervalPreimage{lo, lo + Rational(Integer(1), scale)};
}

/// The trivial construction: experiment space = the n-fold product of the
/// population space, sampler = identity on tuples. Atom e corresponds to the
/// e-th tuple in lexicographic order and carries the product of its entries'
/// weights. Simple against its population by construction.
inline FiniteSampler product_construction(const FinitePopulationSpace& pop, std::size_t arity,
                                          std::uint64_t enumeration_cap = kDefaultEnumerationCap) {
    if (arity == 0) {
        throw std::invalid_argument("sample size n must be at least 1");
    }
    std::uint64_t total = detail::tuple_count_or_throw(pop.size(), arity, enumeration_cap);

    std::vector<std::size_t> table;
    table.reserve(static_cast<std::size_t>(total) * arity);
    IndexTuple tuple(arity, 0);
    if (pop.is_classical()) {
        do {
            table.insert(table.end(), tuple.begin(), tuple.end());
        } while (detail::next_tuple(tuple, pop.size()));
        return FiniteSampler(FiniteExperimentSpace::uniform(static_cast<std::size_t>(total)),
                             pop.size(), arity, std::move(table));
    }
    std::vector<Rational> weights;
    weights.reserve(static_cast<std::size_t>(total));
    do {
        Rational w = 1;
        for (std::size_t idx : tuple) {
            w *= pop.weight(idx);
        }
        weights.push_back(std::move(w));
        table.insert(table.end(), tuple.begin(), tuple.end());
    } while (detail::next_tuple(tuple, pop.size()));
    return FiniteSampler(FiniteExperimentSpace(std::move(weights)), pop.size(), arity,
                         std::move(table));
}

/// Discrete-generator construction over a classical population of size N:
/// E = {0..N^n-1} uniform, S(e) = the base-N digits of e.
inline FiniteSampler discrete_construction(std::size_t population_size, std::size_t arity,
                                           std::uint64_t enumeration_cap = kDefaultEnumerationCap) {
    if (population_size == 0) {
        throw std::invalid_argument("population size must be at least 1");
    }
    if (arity == 0) {
        throw std::invalid_argument("sample size n must be at least 1");
    }
    std::uint64_t total = detail::tuple_count_or_throw(population_size, arity, enumeration_cap);

    std::vector<std::size_t> table;
    table.reserve(static_cast<std::size_t>(total) * arity);
    IndexTuple tuple(arity, 0);
    do {
        table.insert(table.end(), tuple.begin(), tuple.end());
    } while (detail::next_tuple(tuple, population_size));
    return FiniteSampler(FiniteExperimentSpace::uniform(static_cast<std::size_t>(total)),
                         population_size, arity, std::move(table));
}

/// Finite stand-in for the continuous-generator construction over a
/// classical population: one atom per digit tuple, weighted by the exact
/// Lebesgue measure of its preimage cell. S is constant on each cell, so
/// this sampler induces the same tuple and value distributions as the
/// continuous construction itself.
inline FiniteSampler continuous_cell_sampler(std::size_t population_size, std::size_t arity,
                                             std::uint64_t enumeration_cap = kDefaultEnumerationCap) {
    if (population_size == 0) {
        throw std::invalid_argument("population size must be at least 1");
    }
    if (arity == 0) {
        throw std::invalid_argument("sample size n must be at least 1");
    }
    std::uint64_t total = detail::tuple_count_or_throw(population_size, arity, enumeration_cap);
    (void)total;

    std::vector<std::size_t> table;
    std::vector<Rational> weights;
    IndexTuple tuple(arity, 0);
    do {
        weights.push_back(tuple_preimage_interval(tuple, population_size).length());
        table.insert(table.end(), tuple.begin(), tuple.end());
    } while (detail::next_tuple(tuple, population_size));
    return FiniteSampler(FiniteExperimentSpace(std::move(weights)), population_size, arity,
                         std::move(table));
}

}  // namespace srs
