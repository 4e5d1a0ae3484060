#pragma once

#include "srs/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace srs {

/// A finite population probability space: elements are the 0-based ordinal
/// ids 0..N-1, each carrying an exact non-negative weight; weights sum to
/// exactly 1. The sigma-field is the full powerset and is never materialized;
/// events are explicit index sets.
///
/// A space whose weights are all equal (necessarily 1/N each) is "classical".
/// Classical spaces are stored without materializing the weight vector, so a
/// million-element uniform population costs O(1) memory.
class FinitePopulationSpace {
public:
    /// Uniform space of size n. Throws std::invalid_argument when n = 0.
    static FinitePopulationSpace classical(std::size_t n) {
        if (n == 0) {
            throw std::invalid_argument("population size must be at least 1");
        }
        FinitePopulationSpace space;
        space.size_ = n;
        return space;
    }

    /// Space with explicit weights. Weights must be non-negative and sum to
    /// exactly 1; all-equal weights collapse to the classical representation.
    explicit FinitePopulationSpace(std::vector<Rational> weights,
                                   std::vector<std::string> labels = {}) {
        if (weights.empty()) {
            throw std::invalid_argument("population size must be at least 1");
        }
        Rational total = 0;
        bool uniform = true;
        for (const Rational& w : weights) {
            if (w < 0) {
                throw std::invalid_argument("population weights must be non-negative");
            }
            uniform = uniform && w == weights.front();
            total += w;
        }
        if (total != 1) {
            throw std::invalid_argument("population weights must sum to exactly 1, got " +
                                        format_rational(total));
        }
        size_ = weights.size();
        if (!uniform) {
            weights_ = std::move(weights);
        }
        set_labels(std::move(labels));
    }

    std::size_t size() const { return size_; }

    /// True when every element has weight exactly 1/N.
    bool is_classical() const { return weights_.empty(); }

    /// Weight of element i. Throws std::out_of_range for i >= size().
    Rational weight(std::size_t i) const {
        if (i >= size_) {
            throw std::out_of_range("population index " + std::to_string(i) +
                                    " out of range for size " + std::to_string(size_));
        }
        if (is_classical()) {
            return Rational(1, Integer(size_));
        }
        return weights_[i];
    }

    const std::vector<std::string>& labels() const { return labels_; }

    void set_labels(std::vector<std::string> labels) {
        if (!labels.empty() && labels.size() != size_) {
            throw std::invalid_argument("label list must match population size");
        }
        labels_ = std::move(labels);
    }

    friend bool operator==(const FinitePopulationSpace& a, const FinitePopulationSpace& b) {
        if (a.size_ != b.size_) {
            return false;
        }
        if (a.is_classical() && b.is_classical()) {
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
    FinitePopulationSpace() = default;

    std::size_t size_ = 0;
    std::vector<Rational> weights_;  // empty <=> classical
    std::vector<std::string> labels_;
};

/// Total map from population elements to exact values: values()[i] is the
/// value of element i. Length must equal the size of the space it is used
/// with.
class RandomVariable {
public:
    explicit RandomVariable(std::vector<Rational> values) : values_(std::move(values)) {
        if (values_.empty()) {
            throw std::invalid_argument("a random variable needs at least one value");
        }
    }

    /// X(i) = i, handy for sampling the ordinal ids themselves.
    static RandomVariable identity(std::size_t n) {
        std::vector<Rational> values;
        values.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            values.emplace_back(Integer(i));
        }
        return RandomVariable(std::move(values));
    }

    static RandomVariable constant(std::size_t n, Rational value) {
        return RandomVariable(std::vector<Rational>(n, std::move(value)));
    }

    std::size_t size() const { return values_.size(); }
    const Rational& operator()(std::size_t i) const { return values_.at(i); }
    const std::vector<Rational>& values() const { return values_; }

    friend bool operator==(const RandomVariable&, const RandomVariable&) = default;

private:
    std::vector<Rational> values_;
};

/// Exact law of a variable: strictly increasing support with matching
/// probabilities. Probabilities are non-negative and sum to exactly 1; a
/// support value may carry probability 0 (it came from a weight-0 element).
class Distribution {
public:
    /// Builds from an ordered value -> probability map.
    explicit Distribution(const std::map<Rational, Rational>& mass) {
        Rational total = 0;
        support_.reserve(mass.size());
        probs_.reserve(mass.size());
        for (const auto& [value, p] : mass) {
            if (p < 0) {
                throw std::invalid_argument("distribution probabilities must be non-negative");
            }
            support_.push_back(value);
            probs_.push_back(p);
            total += p;
        }
        if (total != 1) {
            throw std::invalid_argument("distribution probabilities must sum to exactly 1, got " +
                                        format_rational(total));
        }
    }

    std::size_t size() const { return support_.size(); }
    const std::vector<Rational>& support() const { return support_; }
    const std::vector<Rational>& probs() const { return probs_; }

    /// Probability of an exact value; 0 when the value is not in the support.
    Rational prob_of(const Rational& value) const {
        auto it = std::lower_bound(support_.begin(), support_.end(), value);
        if (it == support_.end() || *it != value) {
            return Rational(0);
        }
        return probs_[static_cast<std::size_t>(it - support_.begin())];
    }

    /// Strict-< distribution function: total mass of support values strictly
    /// below u. Note the strict inequality; most libraries use <=.
    Rational cdf(const Rational& u) const {
        Rational total = 0;
        for (std::size_t i = 0; i < support_.size() && support_[i] < u; ++i) {
            total += probs_[i];
        }
        return total;
    }

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    std::vector<Rational> support_;
    std::vector<Rational> probs_;
};

/// Compares two distributions as measures: zero-probability support entries
/// on either side are ignored.
inline bool same_law(const Distribution& a, const Distribution& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.probs()[i] != 0 && b.prob_of(a.support()[i]) != a.probs()[i]) {
            return false;
        }
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b.probs()[i] != 0 && a.prob_of(b.support()[i]) != b.probs()[i]) {
            return false;
        }
    }
    return true;
}

/// Uniform population space of size n (every weight exactly 1/n).
inline FinitePopulationSpace make_classical(std::size_t n) {
    return FinitePopulationSpace::classical(n);
}

/// P(A) for an event given as a set of element indices. Duplicate indices are
/// counted once. Throws std::out_of_range for an index >= size.
inline Rational event_probability(const FinitePopulationSpace& space,
                                  std::span<const std::size_t> event) {
    std::vector<bool> member(space.size(), false);
    std::size_t distinct = 0;
    for (std::size_t i : event) {
        if (i >= space.size()) {
            throw std::out_of_range("event index " + std::to_string(i) +
                                    " out of range for population of size " +
                                    std::to_string(space.size()));
        }
        if (!member[i]) {
            member[i] = true;
            ++distinct;
        }
    }
    if (space.is_classical()) {
        return Rational(Integer(distinct), Integer(space.size()));
    }
    Rational total = 0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (member[i]) {
            total += space.weight(i);
        }
    }
    return total;
}

inline Rational event_probability(const FinitePopulationSpace& space,
                                  const std::vector<std::size_t>& event) {
    return event_probability(space, std::span<const std::size_t>(event));
}

/// Law of X under the space's measure: each distinct value of X gets the
/// total weight of its preimage. The support is the set of distinct values
/// of X, including any that carry zero weight.
inline Distribution pushforward(const FinitePopulationSpace& space, const RandomVariable& x) {
    if (x.size() != space.size()) {
        throw std::invalid_argument("variable is defined on " + std::to_string(x.size()) +
                                    " elements but the population has " +
                                    std::to_string(space.size()));
    }
    std::map<Rational, Rational> mass;
    for (std::size_t i = 0; i < space.size(); ++i) {
        mass[x(i)] += space.weight(i);
    }
    return Distribution(mass);
}

/// P({pi : X(pi) < u}), with strict inequality.
inline Rational cdf(const FinitePopulationSpace& space, const RandomVariable& x,
                    const Rational& u) {
    if (x.size() != space.size()) {
        throw std::invalid_argument("variable is defined on " + std::to_string(x.size()) +
                                    " elements but the population has " +
                                    std::to_string(space.size()));
    }
    Rational total = 0;
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (x(i) < u) {
            total += space.weight(i);
        }
    }
    return total;
}

}  // namespace srs
