#pragma once

#include "srs/constructions.hpp"
#include "srs/sampler.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace srs {

/// Seedable, platform-independent 64-bit generator. The engine is the
/// standard-specified mt19937_64, so a given seed yields the same word
/// stream on every platform and in every run; golden values in the test
/// suite rely on this.
///
/// Single-owner mutable state: concurrent sampling should use independent
/// generators with distinct seeds.
class SeededGenerator {
public:
    explicit SeededGenerator(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    static constexpr std::string_view algorithm = "mt19937_64";

    std::uint64_t seed() const { return seed_; }

    /// Next raw 64-bit word of the stream.
    std::uint64_t next_word() { return engine_(); }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Uniform draw from {0..range-1} without modulo bias: words below
/// 2^64 mod range are rejected, which makes every residue class equally
/// likely. Throws std::invalid_argument when range = 0.
inline std::uint64_t draw_discrete(SeededGenerator& gen, std::uint64_t range) {
    if (range == 0) {
        throw std::invalid_argument("discrete draw needs a range of at least 1");
    }
    const std::uint64_t reject_below = (0 - range) % range;  // 2^64 mod range
    for (;;) {
        std::uint64_t word = gen.next_word();
        if (word >= reject_below) {
            return word % range;
        }
    }
}

/// Uniform draw from [0, 1) with 53-bit precision: the top 53 bits of one
/// word, scaled by 2^-53.
inline double draw_continuous(SeededGenerator& gen) {
    return static_cast<double>(gen.next_word() >> 11) * 0x1.0p-53;
}

/// Which generator construction drives a sampling run.
enum class GeneratorKind {
    discrete,    // one draw from {0..N^n-1}, split into base-N digits
    continuous,  // one draw from [0,1), expanded to its first n digits
};

inline GeneratorKind parse_generator_kind(std::string_view name) {
    if (name == "discrete") {
        return GeneratorKind::discrete;
    }
    if (name == "continuous") {
        return GeneratorKind::continuous;
    }
    throw std::invalid_argument("unknown construction \"" + std::string(name) +
                                "\"; expected discrete or continuous");
}

/// Observed tuple counts from a sampling run.
struct FrequencyTable {
    std::size_t arity = 0;
    std::size_t population_size = 0;
    std::map<IndexTuple, std::uint64_t> counts;
    std::uint64_t total = 0;

    friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;
};

/// Draws count tuples through the chosen construction, handing each one to
/// sink in draw order. One generator draw produces one tuple. Throws
/// std::overflow_error when N^n exceeds the 64-bit generator word.
template <typename Sink>
void sample_tuple_stream(GeneratorKind kind, std::size_t population_size, std::size_t arity,
                         std::uint64_t count, std::uint64_t seed, Sink&& sink) {
    if (population_size == 0) {
        throw std::invalid_argument("population size must be at least 1");
    }
    if (arity == 0) {
        throw std::invalid_argument("sample size n must be at least 1");
    }
    if (count == 0) {
        throw std::invalid_argument("draw count must be at least 1");
    }
    SeededGenerator gen(seed);
    if (kind == GeneratorKind::discrete) {
        auto range = checked_pow(population_size, arity);
        if (!range) {
            throw std::overflow_error("N^n exceeds the 64-bit generator word");
        }
        for (std::uint64_t i = 0; i < count; ++i) {
            sink(digits_decompose(draw_discrete(gen, *range), population_size, arity));
        }
    } else {
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uint64_t mantissa = gen.next_word() >> 11;
            sink(continuous_digits_from_mantissa(mantissa, population_size, arity));
        }
    }
}

/// Aggregated tuple counts for count draws through the chosen construction.
/// Identical parameters yield a bit-identical table on every run.
inline FrequencyTable sample_tuples(GeneratorKind kind, std::size_t population_size,
                                    std::size_t arity, std::uint64_t count, std::uint64_t seed) {
    FrequencyTable table;
    table.arity = arity;
    table.population_size = population_size;
    sample_tuple_stream(kind, population_size, arity, count, seed, [&](IndexTuple tuple) {
        ++table.counts[std::move(tuple)];
        ++table.total;
    });
    return table;
}

/// Negative-control tuple source: each digit is drawn with digit 0 at double
/// weight (probability 2/(N+1) instead of 1/N). Everything else matches the
/// discrete path.
inline FrequencyTable sample_tuples_digit_biased(std::size_t population_size, std::size_t arity,
                                                 std::uint64_t count, std::uint64_t seed) {
    if (population_size == 0) {
        throw std::invalid_argument("population size must be at least 1");
    }
    if (arity == 0) {
        throw std::invalid_argument("sample size n must be at least 1");
    }
    if (count == 0) {
        throw std::invalid_argument("draw count must be at least 1");
    }
    SeededGenerator gen(seed);
    FrequencyTable table;
    table.arity = arity;
    table.population_size = population_size;
    IndexTuple tuple(arity);
    for (std::uint64_t i = 0; i < count; ++i) {
        for (std::size_t d = 0; d < arity; ++d) {
            std::uint64_t raw = draw_discrete(gen, population_size + 1);
            tuple[d] = raw <= 1 ? 0 : static_cast<std::size_t>(raw - 1);
        }
        ++table.counts[tuple];
        ++table.total;
    }
    return table;
}

/// Chi-square goodness-of-fit verdict. reject iff statistic > threshold,
/// with threshold the upper-tail critical value at the chosen alpha and
/// degrees_of_freedom = |support| - 1.
struct GofResult {
    double statistic = 0.0;
    std::size_t degrees_of_freedom = 0;
    double threshold = 0.0;
    bool reject = false;
    double alpha = 0.0;

    friend bool operator==(const GofResult&, const GofResult&) = default;
};

namespace detail {

// Regularized lower incomplete gamma P(a, x): series for x < a+1, Lentz
// continued fraction for the complement otherwise.
inline double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) {
        throw std::domain_error("regularized_gamma_p needs a > 0 and x >= 0");
    }
    if (x == 0.0) {
        return 0.0;
    }
    const double log_prefactor = a * std::log(x) - x - std::lgamma(a);
    constexpr int kMaxIterations = 10000;
    constexpr double kEps = 1e-16;
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int k = 1; k < kMaxIterations; ++k) {
            term *= x / (a + k);
            sum += term;
            if (std::abs(term) < std::abs(sum) * kEps) {
                break;
            }
        }
        return sum * std::exp(log_prefactor);
    }
    // Q(a, x) via the standard continued fraction.
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < kMaxIterations; ++k) {
        double an = -k * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) {
            d = kTiny;
        }
        c = b + an / c;
        if (std::abs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    return 1.0 - std::exp(log_prefactor) * h;
}

}  // namespace detail

/// Chi-square CDF P(X <= x) for df degrees of freedom.
inline double chi_square_cdf(double x, std::size_t df) {
    if (df == 0) {
        throw std::domain_error("chi-square needs at least 1 degree of freedom");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    return detail::regularized_gamma_p(static_cast<double>(df) / 2.0, x / 2.0);
}

/// Upper-tail critical value: the x with P(X > x) = alpha, found by
/// bisection on the CDF.
inline double chi_square_upper_quantile(double alpha, std::size_t df) {
    if (df == 0) {
        throw std::domain_error("chi-square needs at least 1 degree of freedom");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie strictly between 0 and 1");
    }
    const double target = 1.0 - alpha;
    double lo = 0.0;
    double hi = static_cast<double>(df) + 10.0 * std::sqrt(2.0 * static_cast<double>(df)) + 20.0;
    while (chi_square_cdf(hi, df) < target) {
        hi *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (chi_square_cdf(mid, df) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-12 * std::max(1.0, hi)) {
            break;
        }
    }
    return 0.5 * (lo + hi);
}

/// Significance levels with supported critical values.
inline constexpr double kSupportedAlphas[] = {0.05, 0.01, 0.001};

/// Pearson chi-square test of observed counts against an exact expected
/// tuple distribution. Every expected count k*p must be at least 5 (the
/// classical validity rule); otherwise the test refuses and asks for more
/// draws. An observation outside the expected support makes the statistic
/// infinite and the test reject.
inline GofResult chi_square_test(const FrequencyTable& observed, const TupleDistribution& expected,
                                 double alpha) {
    bool supported = false;
    for (double a : kSupportedAlphas) {
        supported = supported || alpha == a;
    }
    if (!supported) {
        throw std::invalid_argument("alpha must be one of 0.05, 0.01, 0.001");
    }
    if (observed.arity != expected.arity() ||
        observed.population_size != expected.population_size()) {
        throw std::invalid_argument("observed counts and expected distribution disagree on N or n");
    }
    if (observed.total == 0) {
        throw std::invalid_argument("no observations");
    }

    const Rational draws(Integer(observed.total));
    double statistic = 0.0;
    for (const auto& [tuple, p] : expected) {
        if (p == 0) {
            continue;
        }
        double expected_count = Rational(draws * p).convert_to<double>();
        if (expected_count < 5.0) {
            throw std::invalid_argument(
                "expected count " + std::to_string(expected_count) + " for tuple " +
                detail::format_tuple(tuple) +
                " is below 5; raise the draw count k for a valid chi-square test");
        }
        auto it = observed.counts.find(tuple);
        double obs = it == observed.counts.end() ? 0.0 : static_cast<double>(it->second);
        double diff = obs - expected_count;
        statistic += diff * diff / expected_count;
    }
    for (const auto& [tuple, count] : observed.counts) {
        if (count > 0 && expected.prob_of(tuple) == 0) {
            statistic = std::numeric_limits<double>::infinity();
        }
    }

    GofResult result;
    result.alpha = alpha;
    std::size_t cells = 0;
    for (const auto& [tuple, p] : expected) {
        if (p != 0) {
            ++cells;
        }
    }
    result.degrees_of_freedom = cells - 1;
    result.statistic = statistic;
    result.threshold =
        result.degrees_of_freedom == 0 ? 0.0
                                       : chi_square_upper_quantile(alpha, result.degrees_of_freedom);
    result.reject = result.statistic > result.threshold;
    return result;
}

/// The exact tuple law both generator constructions induce: uniform over all
/// N^n tuples.
inline TupleDistribution uniform_tuple_distribution(std::size_t population_size, std::size_t arity,
                                                    std::uint64_t enumeration_cap = kDefaultEnumerationCap) {
    if (population_size == 0) {
        throw std::invalid_argument("population size must be at least 1");
    }
    if (arity == 0) {
        throw std::invalid_argument("sample size n must be at least 1");
    }
    std::uint64_t total = detail::tuple_count_or_throw(population_size, arity, enumeration_cap);
    Rational p(Integer(1), Integer(total));
    std::map<IndexTuple, Rational> mass;
    IndexTuple tuple(arity, 0);
    do {
        mass.emplace(tuple, p);
    } while (detail::next_tuple(tuple, population_size));
    return TupleDistribution(arity, population_size, std::move(mass));
}

}  // namespace srs
