#pragma once

#include "srs/population.hpp"
#include "srs/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace srs {

/// An ordered tuple of population element indices. Doubles as a tuple of
/// base-N digits in the generator constructions.
using IndexTuple = std::vector<std::size_t>;

/// Enumeration-heavy operations refuse instances with more than this many
/// atoms unless the caller raises the cap explicitly.
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// base^exp, or nullopt on 64-bit overflow.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && result > UINT64_MAX / base) {
            return std::nullopt;
        }
        result *= base;
    }
    return result;
}

namespace detail {

inline std::string format_tuple(std::span<const std::size_t> tuple) {
    std::string out;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += std::to_string(tuple[i]);
    }
    return out;
}

// Counts atoms N^n, refusing instances beyond the cap.
inline std::uint64_t tuple_count_or_throw(std::size_t population_size, std::size_t arity,
                                          std::uint64_t cap) {
    auto total = checked_pow(population_size, arity);
    if (!total || *total > cap) {
        throw std::length_error("instance has more than " + std::to_string(cap) +
                                " tuples; raise the enumeration cap to force this");
    }
    return *total;
}

// Lexicographic odometer over {0..N-1}^n. Returns false after the last tuple.
inline bool next_tuple(IndexTuple& tuple, std::size_t population_size) {
    for (std::size_t i = tuple.size(); i-- > 0;) {
        if (++tuple[i] < population_size) {
            return true;
        }
        tuple[i] = 0;
    }
    return false;
}

}  // namespace detail

/// A finite experiment probability space: atoms 0..M-1 with exact weights
/// summing to 1. Uniform spaces are stored without a weight vector.
class FiniteExperimentSpace {
public:
    /// Uniform space with m atoms of weight 1/m each.
    static FiniteExperimentSpace uniform(std::size_t m) {
        if (m == 0) {
            throw std::invalid_argument("experiment space needs at least one atom");
        }
        FiniteExperimentSpace space;
        space.size_ = m;
        return space;
    }

    explicit FiniteExperimentSpace(std::vector<Rational> weights) {
        if (weights.empty()) {
            throw std::invalid_argument("experiment space needs at least one atom");
        }
        Rational total = 0;
        bool flat = true;
        for (const Rational& w : weights) {
            if (w < 0) {
                throw std::invalid_argument("experiment weights must be non-negative");
            }
            flat = flat && w == weights.front();
            total += w;
        }
        if (total != 1) {
            throw std::invalid_argument("experiment weights must sum to exactly 1, got " +
                                        format_rational(total));
        }
        size_ = weights.size();
        if (!flat) {
            weights_ = std::move(weights);
        }
    }

    std::size_t size() const { return size_; }
    bool is_uniform() const { return weights_.empty(); }

    Rational weight(std::size_t atom) const {
        if (atom >= size_) {
            throw std::out_of_range("experiment atom " + std::to_string(atom) +
                                    " out of range for size " + std::to_string(size_));
        }
        if (is_uniform()) {
            return Rational(1, Integer(size_));
        }
        return weights_[atom];
    }

    friend bool operator==(const FiniteExperimentSpace& a, const FiniteExperimentSpace& b) {
        if (a.size_ != b.size_) {
            return false;
        }
        if (a.is_uniform() && b.is_uniform()) {
            return true;
        }
        for (std::size_t i = 0; i < a.size_; ++i) {
            if (a.weight(i) != b.weight(i)) {
                return false;
            }
        }
        return true;
    }

private:
    FiniteExperimentSpace() = default;

    std::size_t size_ = 0;
    std::vector<Rational> weights_;  // empty <=> uniform
};

/// A sampler mapping over a finite experiment space: a total table assigning
/// each atom e an ordered n-tuple of population indices. Tuples may repeat
/// elements; sampling is with-replacement by construction.
class FiniteSampler {
public:
    /// table is row-major: atom e occupies entries [e*n, (e+1)*n).
    FiniteSampler(FiniteExperimentSpace experiment, std::size_t population_size,
                  std::size_t sample_size, std::vector<std::size_t> table)
        : experiment_(std::move(experiment)),
          population_size_(population_size),
          sample_size_(sample_size),
          table_(std::move(table)) {
        if (population_size_ == 0) {
            throw std::invalid_argument("population size must be at least 1");
        }
        if (sample_size_ == 0) {
            throw std::invalid_argument("sample size n must be at least 1");
        }
        if (table_.size() != experiment_.size() * sample_size_) {
            throw std::invalid_argument("sampler table must provide one length-" +
                                        std::to_string(sample_size_) + " tuple per atom");
        }
        for (std::size_t idx : table_) {
            if (idx >= population_size_) {
                throw std::out_of_range("sampler table entry " + std::to_string(idx) +
                                        " out of range for population of size " +
                                        std::to_string(population_size_));
            }
        }
    }

    const FiniteExperimentSpace& experiment() const { return experiment_; }
    std::size_t population_size() const { return population_size_; }
    std::size_t sample_size() const { return sample_size_; }

    /// S(e): the tuple assigned to atom e.
    std::span<const std::size_t> tuple_at(std::size_t atom) const {
        if (atom >= experiment_.size()) {
            throw std::out_of_range("experiment atom " + std::to_string(atom) +
                                    " out of range for size " +
                                    std::to_string(experiment_.size()));
        }
        return std::span<const std::size_t>(table_).subspan(atom * sample_size_, sample_size_);
    }

    /// S_i(e), 0-based coordinate.
    std::size_t component(std::size_t atom, std::size_t i) const { return tuple_at(atom)[i]; }

    const std::vector<std::size_t>& table() const { return table_; }

    friend bool operator==(const FiniteSampler&, const FiniteSampler&) = default;

private:
    FiniteExperimentSpace experiment_;
    std::size_t population_size_;
    std::size_t sample_size_;
    std::vector<std::size_t> table_;
};

/// Exact pushforward of the sampler mapping: probability of each n-tuple of
/// population indices. Tuples absent from the map carry probability 0.
class TupleDistribution {
public:
    TupleDistribution(std::size_t arity, std::size_t population_size,
                      std::map<IndexTuple, Rational> mass)
        : arity_(arity), population_size_(population_size), mass_(std::move(mass)) {}

    std::size_t arity() const { return arity_; }
    std::size_t population_size() const { return population_size_; }
    std::size_t support_size() const { return mass_.size(); }

    Rational prob_of(const IndexTuple& tuple) const {
        auto it = mass_.find(tuple);
        return it == mass_.end() ? Rational(0) : it->second;
    }

    auto begin() const { return mass_.begin(); }
    auto end() const { return mass_.end(); }

    Rational total_mass() const {
        Rational total = 0;
        for (const auto& [tuple, p] : mass_) {
            total += p;
        }
        return total;
    }

private:
    std::size_t arity_;
    std::size_t population_size_;
    std::map<IndexTuple, Rational> mass_;
};

/// Outcome of the atom-level simpleness check. worst_tuple is the
/// lexicographically first tuple attaining the largest |actual - expected|;
/// with exact arithmetic any nonzero deviation is a hard failure and the
/// magnitude only aids diagnostics.
struct SimplenessReport {
    bool is_simple = false;
    std::optional<IndexTuple> worst_tuple;
    Rational worst_deviation = 0;
    std::uint64_t checked_rectangles = 0;

    friend bool operator==(const SimplenessReport&, const SimplenessReport&) = default;
};

/// Pushforward of S under P_E: probability of tuple t is the total weight of
/// atoms mapped to t.
inline TupleDistribution tuple_distribution(const FiniteSampler& s) {
    std::map<IndexTuple, Rational> mass;
    for (std::size_t atom = 0; atom < s.experiment().size(); ++atom) {
        Rational w = s.experiment().weight(atom);
        if (w == 0) {
            continue;
        }
        auto row = s.tuple_at(atom);
        mass[IndexTuple(row.begin(), row.end())] += w;
    }
    return TupleDistribution(s.sample_size(), s.population_size(), std::move(mass));
}

/// P_E({e : S_i(e) in B_i for all i}) for one rectangle. rectangle[i] is the
/// index set B_i; it must have exactly n slots.
inline Rational rectangle_probability(const FiniteSampler& s,
                                      const std::vector<std::vector<std::size_t>>& rectangle) {
    if (rectangle.size() != s.sample_size()) {
        throw std::invalid_argument("rectangle needs exactly " +
                                    std::to_string(s.sample_size()) + " index sets, got " +
                                    std::to_string(rectangle.size()));
    }
    std::vector<std::vector<bool>> member(s.sample_size(),
                                          std::vector<bool>(s.population_size(), false));
    for (std::size_t i = 0; i < rectangle.size(); ++i) {
        for (std::size_t idx : rectangle[i]) {
            if (idx >= s.population_size()) {
                throw std::out_of_range("rectangle index " + std::to_string(idx) +
                                        " out of range for population of size " +
                                        std::to_string(s.population_size()));
            }
            member[i][idx] = true;
        }
    }
    Rational total = 0;
    for (std::size_t atom = 0; atom < s.experiment().size(); ++atom) {
        auto row = s.tuple_at(atom);
        bool inside = true;
        for (std::size_t i = 0; i < row.size() && inside; ++i) {
            inside = member[i][row[i]];
        }
        if (inside) {
            total += s.experiment().weight(atom);
        }
    }
    return total;
}

/// Atom-level simpleness check: S is simple iff every tuple t has
/// P_E(S = t) equal to the product of the population weights of its entries.
/// Atom equality implies the full rectangle property by finite additivity,
/// so this check is exact and sufficient on finite spaces.
///
/// Enumerates all N^n tuples; throws std::length_error beyond the cap.
inline SimplenessReport simpleness_report(const FiniteSampler& s,
                                          const FinitePopulationSpace& pop,
                                          std::uint64_t enumeration_cap = kDefaultEnumerationCap) {
    if (s.population_size() != pop.size()) {
        throw std::invalid_argument("sampler expects a population of size " +
                                    std::to_string(s.population_size()) + ", got " +
                                    std::to_string(pop.size()));
    }
    std::uint64_t total =
        detail::tuple_count_or_throw(pop.size(), s.sample_size(), enumeration_cap);
    TupleDistribution actual = tuple_distribution(s);

    SimplenessReport report;
    report.checked_rectangles = total;
    report.worst_deviation = 0;

    IndexTuple tuple(s.sample_size(), 0);
    do {
        Rational expected = 1;
        for (std::size_t idx : tuple) {
            expected *= pop.weight(idx);
        }
        Rational deviation = abs(actual.prob_of(tuple) - expected);
        if (deviation > report.worst_deviation) {
            report.worst_deviation = deviation;
            report.worst_tuple = tuple;
        }
    } while (detail::next_tuple(tuple, pop.size()));

    report.is_simple = report.worst_deviation == 0;
    return report;
}

/// Literal all-rectangles form of the simpleness property: quantifies over
/// every choice of subsets B_1..B_n. Exponential in N*n, so the instance is
/// required to satisfy N <= 4 and n <= 2; use simpleness_report otherwise.
inline bool exhaustive_rectangle_check(const FiniteSampler& s,
                                       const FinitePopulationSpace& pop) {
    if (s.population_size() != pop.size()) {
        throw std::invalid_argument("sampler expects a population of size " +
                                    std::to_string(s.population_size()) + ", got " +
                                    std::to_string(pop.size()));
    }
    if (pop.size() > 4 || s.sample_size() > 2) {
        throw std::length_error(
            "exhaustive rectangle check enumerates 2^(N*n) rectangles and is limited to "
            "N <= 4, n <= 2");
    }
    const std::size_t n = s.sample_size();
    const std::size_t subset_count = std::size_t(1) << pop.size();

    // Odometer over one subset bitmask per slot.
    std::vector<std::size_t> choice(n, 0);
    for (;;) {
        std::vector<std::vector<std::size_t>> rectangle(n);
        Rational product = 1;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t idx = 0; idx < pop.size(); ++idx) {
                if (choice[i] & (std::size_t(1) << idx)) {
                    rectangle[i].push_back(idx);
                }
            }
            product *= event_probability(pop, rectangle[i]);
        }
        if (rectangle_probability(s, rectangle) != product) {
            return false;
        }
        std::size_t slot = n;
        while (slot-- > 0) {
            if (++choice[slot] < subset_count) {
                break;
            }
            choice[slot] = 0;
            if (slot == 0) {
                return true;
            }
        }
    }
}

/// Tuple-version check for classical populations: S is simple iff each of
/// the N^n ordered tuples has probability exactly N^(-n). Equivalent to
/// simpleness_report on classical populations.
///
/// Throws std::domain_error when the population is not classical.
inline bool classical_tuple_check(const FiniteSampler& s, const FinitePopulationSpace& pop) {
    if (s.population_size() != pop.size()) {
        throw std::invalid_argument("sampler expects a population of size " +
                                    std::to_string(s.population_size()) + ", got " +
                                    std::to_string(pop.size()));
    }
    if (!pop.is_classical()) {
        throw std::domain_error(
            "the tuple-version check applies only to classical (equal-weight) populations");
    }
    auto total = checked_pow(pop.size(), s.sample_size());
    if (!total) {
        // More tuples than a 64-bit count: a finite table cannot cover them
        // all at equal positive mass.
        return false;
    }
    TupleDistribution actual = tuple_distribution(s);
    if (actual.support_size() != *total) {
        return false;
    }
    Rational target(Integer(1), Integer(*total));
    for (const auto& [tuple, p] : actual) {
        if (p != target) {
            return false;
        }
    }
    return true;
}

/// Probability that the selected sample, viewed as a set, equals the given
/// n distinct population elements: the total mass of all n! orderings.
/// For a simple sampler over a classical population this is n!/N^n.
inline Rational subset_selection_probability(const FiniteSampler& s,
                                             const std::vector<std::size_t>& subset) {
    if (subset.size() != s.sample_size()) {
        throw std::invalid_argument("subset must contain exactly n = " +
                                    std::to_string(s.sample_size()) + " elements, got " +
                                    std::to_string(subset.size()));
    }
    IndexTuple sorted = subset;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] >= s.population_size()) {
            throw std::out_of_range("subset element " + std::to_string(sorted[i]) +
                                    " out of range for population of size " +
                                    std::to_string(s.population_size()));
        }
        if (i > 0 && sorted[i] == sorted[i - 1]) {
            throw std::invalid_argument("subset elements must be distinct");
        }
    }
    TupleDistribution dist = tuple_distribution(s);
    Rational total = 0;
    do {
        total += dist.prob_of(sorted);
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    return total;
}

}  // namespace srs
