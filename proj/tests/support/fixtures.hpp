#pragma once

#include "srs/constructions.hpp"
#include "srs/population.hpp"
#include "srs/sampler.hpp"

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace srs::testfix {

// Ordered sampling without replacement: all N*(N-1)*...*(N-n+1) ordered
// tuples of distinct elements, equally likely. Marginally uniform but not
// simple; the canonical negative control.
inline FiniteSampler without_replacement_sampler(std::size_t population_size, std::size_t arity) {
    if (arity == 0 || arity > population_size) {
        throw std::invalid_argument("without-replacement needs 1 <= n <= N");
    }
    std::vector<std::size_t> table;
    IndexTuple tuple(arity, 0);
    auto distinct = [&] {
        for (std::size_t i = 0; i < arity; ++i) {
            for (std::size_t j = i + 1; j < arity; ++j) {
                if (tuple[i] == tuple[j]) {
                    return false;
                }
            }
        }
        return true;
    };
    do {
        if (distinct()) {
            table.insert(table.end(), tuple.begin(), tuple.end());
        }
    } while (srs::detail::next_tuple(tuple, population_size));
    const std::size_t atoms = table.size() / arity;
    return FiniteSampler(FiniteExperimentSpace::uniform(atoms), population_size, arity,
                         std::move(table));
}

// Every atom maps to the same tuple (all zeros).
inline FiniteSampler constant_sampler(std::size_t population_size, std::size_t arity,
                                      std::size_t atoms = 2) {
    return FiniteSampler(FiniteExperimentSpace::uniform(atoms), population_size, arity,
                         std::vector<std::size_t>(atoms * arity, 0));
}

// Random exact weight vector: positive integer draws normalized by their
// sum, so the weights sum to exactly 1.
inline std::vector<Rational> random_weights(std::mt19937_64& rng, std::size_t count,
                                            std::uint64_t max_part = 9) {
    std::vector<std::uint64_t> parts(count);
    std::uint64_t total = 0;
    for (auto& p : parts) {
        p = rng() % max_part + 1;
        total += p;
    }
    std::vector<Rational> weights;
    weights.reserve(count);
    for (std::uint64_t p : parts) {
        weights.emplace_back(Integer(p), Integer(total));
    }
    return weights;
}

// Arbitrary sampler over a random experiment space with a random table.
// Almost never simple; exercises the checking machinery.
inline FiniteSampler random_sampler(std::mt19937_64& rng, std::size_t population_size,
                                    std::size_t arity, std::size_t atoms, bool uniform_weights) {
    std::vector<std::size_t> table(atoms * arity);
    for (auto& entry : table) {
        entry = rng() % population_size;
    }
    FiniteExperimentSpace space = uniform_weights
                                      ? FiniteExperimentSpace::uniform(atoms)
                                      : FiniteExperimentSpace(random_weights(rng, atoms));
    return FiniteSampler(std::move(space), population_size, arity, std::move(table));
}

// The recurring nonclassical population.
inline FinitePopulationSpace halves_thirds_sixths() {
    return FinitePopulationSpace({Rational(1, 2), Rational(1, 3), Rational(1, 6)});
}

}  // namespace srs::testfix
