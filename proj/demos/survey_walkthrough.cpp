// A large uniform population handled exactly: a health survey over one
// million people, a 0/1 indicator variable, and its exact law.

#include "srs/srs.hpp"

#include <iostream>
#include <vector>

int main() {
    using namespace srs;

    const std::size_t people = 1'000'000;
    FinitePopulationSpace survey = make_classical(people);
    std::cout << "population size: " << survey.size() << '\n';
    std::cout << "weight of one person: " << format_rational(survey.weight(123'456)) << '\n';

    // Event: the first quarter of the ids.
    std::vector<std::size_t> quarter(people / 4);
    for (std::size_t i = 0; i < quarter.size(); ++i) {
        quarter[i] = i;
    }
    std::cout << "P(first quarter): " << format_rational(event_probability(survey, quarter))
              << '\n';

    // Indicator of a condition that 1 in 8 people has.
    std::vector<Rational> indicator(people, Rational(0));
    for (std::size_t i = 0; i < people; i += 8) {
        indicator[i] = 1;
    }
    RandomVariable x(indicator);
    Distribution law = pushforward(survey, x);
    std::cout << "P(X = 1): " << format_rational(law.prob_of(Rational(1))) << '\n';
    std::cout << "P(X < 1): " << format_rational(cdf(survey, x, Rational(1))) << '\n';
    std::cout << "P(X < 2): " << format_rational(cdf(survey, x, Rational(2))) << '\n';
    return 0;
}
