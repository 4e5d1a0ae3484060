#pragma once

#include "srs/population.hpp"
#include "srs/rational.hpp"
#include "srs/sampler.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace srs {

/// Exact joint law of the induced sample variables (X_1,...,X_n) where
/// X_i(e) = X(S_i(e)). Keys are value tuples; tuples absent from the map
/// carry probability 0.
class JointValueDistribution {
public:
    JointValueDistribution(std::size_t arity, std::map<std::vector<Rational>, Rational> mass)
        : arity_(arity), mass_(std::move(mass)) {}

    std::size_t arity() const { return arity_; }
    std::size_t support_size() const { return mass_.size(); }

    Rational prob_of(const std::vector<Rational>& values) const {
        auto it = mass_.find(values);
        return it == mass_.end() ? Rational(0) : it->second;
    }

    /// P(X_1 < u_1, ..., X_n < u_n) with strict inequalities throughout.
    Rational cdf(const std::vector<Rational>& thresholds) const {
        if (thresholds.size() != arity_) {
            throw std::invalid_argument("expected " + std::to_string(arity_) +
                                        " thresholds, got " + std::to_string(thresholds.size()));
        }
        Rational total = 0;
        for (const auto& [values, p] : mass_) {
            bool below = true;
            for (std::size_t i = 0; i < arity_ && below; ++i) {
                below = values[i] < thresholds[i];
            }
            if (below) {
                total += p;
            }
        }
        return total;
    }

    Rational total_mass() const {
        Rational total = 0;
        for (const auto& [values, p] : mass_) {
            total += p;
        }
        return total;
    }

    auto begin() const { return mass_.begin(); }
    auto end() const { return mass_.end(); }

private:
    std::size_t arity_;
    std::map<std::vector<Rational>, Rational> mass_;
};

/// Verdict on the three conclusions checked against a sampler-variable pair:
/// the marginals agree with each other, they agree with the law of X under
/// the population measure, and the joint factorizes. When a check fails,
/// witness holds the lexicographically first failing value tuple of the
/// first failing check in the order above (a single value for the marginal
/// checks, a full value tuple for independence).
struct IidReport {
    bool marginals_identical = false;
    bool marginals_match_population = false;
    bool independent = false;
    std::optional<std::vector<Rational>> witness;

    bool all_pass() const {
        return marginals_identical && marginals_match_population && independent;
    }

    friend bool operator==(const IidReport&, const IidReport&) = default;
};

/// Joint law of (X(S_1(e)),...,X(S_n(e))) by exact atom enumeration.
inline JointValueDistribution induced_joint(const FiniteSampler& s,
                                            const FinitePopulationSpace& pop,
                                            const RandomVariable& x) {
    if (s.population_size() != pop.size()) {
        throw std::invalid_argument("sampler expects a population of size " +
                                    std::to_string(s.population_size()) + ", got " +
                                    std::to_string(pop.size()));
    }
    if (x.size() != pop.size()) {
        throw std::invalid_argument("variable is defined on " + std::to_string(x.size()) +
                                    " elements but the population has " +
                                    std::to_string(pop.size()));
    }
    std::map<std::vector<Rational>, Rational> mass;
    std::vector<Rational> values(s.sample_size());
    for (std::size_t atom = 0; atom < s.experiment().size(); ++atom) {
        Rational w = s.experiment().weight(atom);
        if (w == 0) {
            continue;
        }
        auto row = s.tuple_at(atom);
        for (std::size_t i = 0; i < row.size(); ++i) {
            values[i] = x(row[i]);
        }
        mass[values] += w;
    }
    return JointValueDistribution(s.sample_size(), std::move(mass));
}

/// Law of the i-th coordinate (0-based), summing the joint mass over all
/// other coordinates.
inline Distribution marginal(const JointValueDistribution& joint, std::size_t i) {
    if (i >= joint.arity()) {
        throw std::out_of_range("coordinate " + std::to_string(i) +
                                " out of range for arity " + std::to_string(joint.arity()));
    }
    std::map<Rational, Rational> mass;
    for (const auto& [values, p] : joint) {
        mass[values[i]] += p;
    }
    return Distribution(mass);
}

namespace detail {

// First support value (ascending) where the two laws assign different mass,
// ignoring zero-probability support entries.
inline std::optional<Rational> first_law_difference(const Distribution& a,
                                                    const Distribution& b) {
    std::optional<Rational> where;
    auto scan = [&](const Distribution& lhs, const Distribution& rhs) {
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            const Rational& v = lhs.support()[i];
            if (lhs.probs()[i] != rhs.prob_of(v)) {
                if (!where || v < *where) {
                    where = v;
                }
                return;
            }
        }
    };
    scan(a, b);
    scan(b, a);
    return where;
}

}  // namespace detail

/// Checks the iid conclusion for the induced sample variables of (s, X):
/// identical marginals, marginals equal to pushforward(pop, X), and exact
/// factorization of the joint mass over the product of marginal supports.
/// All comparisons are exact; distributions are compared as measures, so
/// zero-probability support values never cause a mismatch.
inline IidReport check_proposition1(const FiniteSampler& s, const FinitePopulationSpace& pop,
                                    const RandomVariable& x) {
    JointValueDistribution joint = induced_joint(s, pop, x);
    Distribution reference = pushforward(pop, x);

    std::vector<Distribution> marginals;
    marginals.reserve(joint.arity());
    for (std::size_t i = 0; i < joint.arity(); ++i) {
        marginals.push_back(marginal(joint, i));
    }

    IidReport report;
    report.marginals_identical = true;
    report.marginals_match_population = true;
    report.independent = true;

    for (std::size_t i = 1; i < marginals.size() && report.marginals_identical; ++i) {
        if (auto diff = detail::first_law_difference(marginals[i], marginals[0])) {
            report.marginals_identical = false;
            report.witness = std::vector<Rational>{*diff};
        }
    }
    for (std::size_t i = 0; i < marginals.size() && report.marginals_match_population; ++i) {
        if (auto diff = detail::first_law_difference(marginals[i], reference)) {
            report.marginals_match_population = false;
            if (!report.witness) {
                report.witness = std::vector<Rational>{*diff};
            }
        }
    }

    // Pointwise factorization over the product of positive-mass marginal
    // supports; value tuples outside that lattice have zero mass on both
    // sides. Walked in lexicographic value order.
    std::vector<std::vector<std::pair<Rational, Rational>>> axes(joint.arity());
    for (std::size_t i = 0; i < joint.arity(); ++i) {
        const Distribution& m = marginals[i];
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m.probs()[k] != 0) {
                axes[i].emplace_back(m.support()[k], m.probs()[k]);
            }
        }
    }
    std::vector<std::size_t> pick(joint.arity(), 0);
    std::vector<Rational> values(joint.arity());
    bool more = true;
    while (more && report.independent) {
        Rational product = 1;
        for (std::size_t i = 0; i < joint.arity(); ++i) {
            values[i] = axes[i][pick[i]].first;
            product *= axes[i][pick[i]].second;
        }
        if (joint.prob_of(values) != product) {
            report.independent = false;
            if (!report.witness) {
                report.witness = values;
            }
        }
        std::size_t slot = joint.arity();
        more = false;
        while (slot-- > 0) {
            if (++pick[slot] < axes[slot].size()) {
                more = true;
                break;
            }
            pick[slot] = 0;
        }
    }
    return report;
}

}  // namespace srs
