// Acceptance suite: one line per criterion, PASS/FAIL with timing.
// Exit code is the number of failed criteria.

#include "srs/srs.hpp"

#include "support/fixtures.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace srs;

namespace {

std::filesystem::path work_dir() {
    auto dir = std::filesystem::temp_directory_path() / "srs_acceptance";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string cli_path() {
    const char* cli = std::getenv("SRS_CLI");
    return cli == nullptr ? std::string() : std::string(cli);
}

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run_cli(const std::string& args) {
    auto out_path = work_dir() / "cli_stdout.txt";
    std::string command = "\"" + cli_path() + "\" " + args + " >" + out_path.string() + " 2>&1";
    int status = std::system(command.c_str());
    CliRun run;
    run.code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    run.out = buffer.str();
    return run;
}

bool check(bool condition, const std::string& message, std::string& detail) {
    if (!condition && detail.empty()) {
        detail = message;
    }
    return condition;
}

// 1. Discrete-construction simpleness through the CLI for all N in 1..6,
//    n in 1..4 with N^n <= 4096.
bool criterion1(std::string& detail) {
    if (cli_path().empty()) {
        detail = "SRS_CLI is not set";
        return false;
    }
    bool ok = true;
    for (std::size_t N = 1; N <= 6; ++N) {
        auto pop = work_dir() / ("pop" + std::to_string(N) + ".json");
        save_json_file(pop, population_to_json(make_classical(N)));
        for (std::size_t n = 1; n <= 4; ++n) {
            auto total = checked_pow(N, n);
            if (!total || *total > 4096) {
                continue;
            }
            std::string tag = std::to_string(N) + "_" + std::to_string(n);
            auto sampler = work_dir() / ("discrete" + tag + ".json");
            std::string construct = "construct discrete --size " + std::to_string(N) + " --n " +
                                    std::to_string(n) + " --out " + sampler.string();
            ok &= check(run_cli(construct).code == 0, "construct failed for " + tag, detail);
            CliRun verify =
                run_cli("--json verify --population " + pop.string() + " --sampler " +
                        sampler.string());
            ok &= check(verify.code == 0, "verify exit code nonzero for " + tag, detail);
            if (verify.code != 0) {
                continue;
            }
            auto report = nlohmann::json::parse(verify.out).get<SimplenessReport>();
            ok &= check(report.is_simple, "not simple for " + tag, detail);
            ok &= check(report.worst_deviation == 0, "nonzero deviation for " + tag, detail);
            ok &= check(report.checked_rectangles == *total,
                        "wrong rectangle count for " + tag, detail);
        }
    }
    return ok;
}

// 2. Continuous-construction cells: exact length N^(-n), pairwise disjoint,
//    union [0,1).
bool criterion2(std::string& detail) {
    bool ok = true;
    for (std::size_t N : {2, 3, 4}) {
        for (std::size_t n : {1, 2, 3}) {
            Rational width(Integer(1), Integer(*checked_pow(N, n)));
            Rational edge = 0;
            IndexTuple tuple(n, 0);
            do {
                IntervalPreimage cell = tuple_preimage_interval(tuple, N);
                std::string tag = std::to_string(N) + "^" + std::to_string(n);
                ok &= check(cell.length() == width, "wrong cell length at " + tag, detail);
                ok &= check(cell.lo == edge, "gap or overlap at " + tag, detail);
                edge = cell.hi;
            } while (detail.empty() && srs::detail::next_tuple(tuple, N));
            ok &= check(edge == 1, "union does not reach 1", detail);
        }
    }
    return ok;
}

// 3. Proposition-style exhaustive iid verification across the fixture
//    matrix of simple samplers and variables.
bool criterion3(std::string& detail) {
    struct Fixture {
        std::string name;
        FinitePopulationSpace pop;
        FiniteSampler sampler;
    };
    std::vector<Fixture> fixtures;
    for (std::size_t N = 2; N <= 5; ++N) {
        for (std::size_t n : {2, 3}) {
            auto pop = make_classical(N);
            fixtures.push_back({"product N=" + std::to_string(N) + " n=" + std::to_string(n),
                                pop, product_construction(pop, n)});
        }
    }
    auto skew = testfix::halves_thirds_sixths();
    for (std::size_t n : {2, 3}) {
        fixtures.push_back({"product skew n=" + std::to_string(n), skew,
                            product_construction(skew, n)});
    }
    for (std::size_t N = 2; N <= 4; ++N) {
        for (std::size_t n : {2, 3}) {
            fixtures.push_back({"discrete N=" + std::to_string(N) + " n=" + std::to_string(n),
                                make_classical(N), discrete_construction(N, n)});
        }
    }

    bool ok = true;
    for (const Fixture& fixture : fixtures) {
        const std::size_t N = fixture.pop.size();
        std::vector<Rational> alternating;
        for (std::size_t i = 0; i < N; ++i) {
            alternating.emplace_back(Integer(i % 2));
        }
        const RandomVariable variables[] = {RandomVariable::identity(N),
                                            RandomVariable::constant(N, Rational(1, 2)),
                                            RandomVariable(alternating)};
        const char* names[] = {"identity", "constant", "two-valued"};
        for (std::size_t v = 0; v < 3; ++v) {
            IidReport r = check_proposition1(fixture.sampler, fixture.pop, variables[v]);
            ok &= check(r.marginals_identical,
                        fixture.name + ", " + names[v] + ": marginals differ", detail);
            ok &= check(r.marginals_match_population,
                        fixture.name + ", " + names[v] + ": marginal law mismatch", detail);
            ok &= check(r.independent,
                        fixture.name + ", " + names[v] + ": joint does not factorize", detail);
        }
    }
    return ok;
}

// 4. Negative control: without-replacement sampling fails simpleness with a
//    repeated-pair worst tuple and fails independence while the marginals
//    still match the population law.
bool criterion4(std::string& detail) {
    bool ok = true;
    for (std::size_t N = 3; N <= 5; ++N) {
        std::string tag = "N=" + std::to_string(N);
        auto pop = make_classical(N);
        auto s = testfix::without_replacement_sampler(N, 2);

        SimplenessReport sr = simpleness_report(s, pop);
        ok &= check(!sr.is_simple, tag + ": unexpectedly simple", detail);
        ok &= check(sr.worst_tuple.has_value(), tag + ": no worst tuple", detail);
        if (sr.worst_tuple) {
            ok &= check((*sr.worst_tuple)[0] == (*sr.worst_tuple)[1],
                        tag + ": worst tuple is not a repeated pair", detail);
        }

        IidReport ir = check_proposition1(s, pop, RandomVariable::identity(N));
        ok &= check(ir.marginals_identical, tag + ": marginals differ", detail);
        ok &= check(ir.marginals_match_population, tag + ": marginal law mismatch", detail);
        ok &= check(!ir.independent, tag + ": unexpectedly independent", detail);
        ok &= check(ir.witness.has_value(), tag + ": no independence witness", detail);
    }
    return ok;
}

// 5. Subset selection probability n!/N^n over every subset.
bool criterion5(std::string& detail) {
    bool ok = true;
    auto s52 = discrete_construction(5, 2);
    for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = a + 1; b < 5; ++b) {
            ok &= check(subset_selection_probability(s52, {a, b}) == Rational(2, 25),
                        "N=5 subset {" + std::to_string(a) + "," + std::to_string(b) +
                            "} is not 2/25",
                        detail);
        }
    }
    auto s63 = discrete_construction(6, 3);
    for (std::size_t a = 0; a < 6; ++a) {
        for (std::size_t b = a + 1; b < 6; ++b) {
            for (std::size_t c = b + 1; c < 6; ++c) {
                ok &= check(subset_selection_probability(s63, {a, b, c}) == Rational(1, 36),
                            "N=6 subset {" + std::to_string(a) + "," + std::to_string(b) + "," +
                                std::to_string(c) + "} is not 1/36",
                            detail);
            }
        }
    }
    return ok;
}

// 6. Atom-level, all-rectangles, and classical tuple-version checks agree on
//    every N <= 4, n <= 2 fixture.
bool criterion6(std::string& detail) {
    bool ok = true;
    std::mt19937_64 rng(2024);
    for (std::size_t N = 1; N <= 4; ++N) {
        for (std::size_t n = 1; n <= 2; ++n) {
            auto pop = make_classical(N);
            std::vector<FiniteSampler> samplers;
            samplers.push_back(discrete_construction(N, n));
            samplers.push_back(product_construction(pop, n));
            samplers.push_back(testfix::constant_sampler(N, n));
            if (n <= N) {
                samplers.push_back(testfix::without_replacement_sampler(N, n));
            }
            for (int extra = 0; extra < 10; ++extra) {
                samplers.push_back(
                    testfix::random_sampler(rng, N, n, rng() % 12 + 1, extra % 2 == 0));
            }
            for (std::size_t i = 0; i < samplers.size(); ++i) {
                std::string tag = "N=" + std::to_string(N) + " n=" + std::to_string(n) +
                                  " sampler#" + std::to_string(i);
                bool atom = simpleness_report(samplers[i], pop).is_simple;
                bool rect = exhaustive_rectangle_check(samplers[i], pop);
                bool tuple = classical_tuple_check(samplers[i], pop);
                ok &= check(atom == rect, tag + ": rectangle check disagrees", detail);
                ok &= check(atom == tuple, tag + ": tuple-version check disagrees", detail);
            }
        }
    }
    auto skew = testfix::halves_thirds_sixths();
    for (std::size_t n = 1; n <= 2; ++n) {
        auto s = product_construction(skew, n);
        ok &= check(exhaustive_rectangle_check(s, skew) == simpleness_report(s, skew).is_simple,
                    "skew product: rectangle check disagrees", detail);
    }
    return ok;
}

// 7. Statistical harness: 100 seeds, k=100000, alpha=0.01. The two honest
//    constructions are rejected at most 4 times each; the biased generator
//    at least 99 times.
bool criterion7(std::string& detail) {
    TupleDistribution expected = uniform_tuple_distribution(4, 2);
    int rejections_discrete = 0;
    int rejections_continuous = 0;
    int rejections_biased = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        if (chi_square_test(sample_tuples(GeneratorKind::discrete, 4, 2, 100'000, seed),
                            expected, 0.01)
                .reject) {
            ++rejections_discrete;
        }
        if (chi_square_test(sample_tuples(GeneratorKind::continuous, 4, 2, 100'000, seed),
                            expected, 0.01)
                .reject) {
            ++rejections_continuous;
        }
        if (chi_square_test(sample_tuples_digit_biased(4, 2, 100'000, seed), expected, 0.01)
                .reject) {
            ++rejections_biased;
        }
    }
    bool ok = true;
    ok &= check(rejections_discrete <= 4,
                "discrete rejected " + std::to_string(rejections_discrete) + " times", detail);
    ok &= check(rejections_continuous <= 4,
                "continuous rejected " + std::to_string(rejections_continuous) + " times",
                detail);
    ok &= check(rejections_biased >= 99,
                "biased rejected only " + std::to_string(rejections_biased) + " times", detail);
    return ok;
}

// 8. Reproducibility: identical seeds give bit-identical tuple streams (two
//    consecutive CLI runs) and identical GofResults.
bool criterion8(std::string& detail) {
    if (cli_path().empty()) {
        detail = "SRS_CLI is not set";
        return false;
    }
    bool ok = true;
    for (const char* construction : {"discrete", "continuous"}) {
        auto first = work_dir() / (std::string("stream_") + construction + "_1.txt");
        auto second = work_dir() / (std::string("stream_") + construction + "_2.txt");
        for (const auto& path : {first, second}) {
            std::string command = std::string("sample --construction ") + construction +
                                  " --size 4 --n 2 --count 100000 --seed 7 --emit " +
                                  path.string();
            ok &= check(run_cli(command).code == 0,
                        std::string(construction) + ": sample run failed", detail);
        }
        std::ifstream a(first, std::ios::binary);
        std::ifstream b(second, std::ios::binary);
        std::stringstream sa;
        std::stringstream sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        ok &= check(!sa.str().empty() && sa.str() == sb.str(),
                    std::string(construction) + ": streams differ between runs", detail);

        GeneratorKind kind = parse_generator_kind(construction);
        GofResult r1 = chi_square_test(sample_tuples(kind, 4, 2, 100'000, 7),
                                       uniform_tuple_distribution(4, 2), 0.01);
        GofResult r2 = chi_square_test(sample_tuples(kind, 4, 2, 100'000, 7),
                                       uniform_tuple_distribution(4, 2), 0.01);
        ok &= check(r1 == r2, std::string(construction) + ": GofResults differ", detail);
    }
    return ok;
}

struct Criterion {
    int number;
    std::string name;
    std::function<bool(std::string&)> run;
    std::optional<long> time_limit_ms;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "discrete-construction simpleness via verify", criterion1, 5000},
        {2, "continuous cells partition [0,1) at exact length", criterion2, 1000},
        {3, "exhaustive iid verification on simple samplers", criterion3, 10000},
        {4, "without-replacement negative control", criterion4, std::nullopt},
        {5, "subset selection probability n!/N^n", criterion5, std::nullopt},
        {6, "atom, rectangle, and tuple-version checks agree", criterion6, std::nullopt},
        {7, "statistical harness over 100 seeds", criterion7, 60000},
        {8, "bit-identical reproducibility", criterion8, std::nullopt},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        std::string detail;
        auto start = std::chrono::steady_clock::now();
        bool ok = criterion.run(detail);
        auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
        if (criterion.time_limit_ms && elapsed_ms >= *criterion.time_limit_ms) {
            ok = false;
            detail = "took " + std::to_string(elapsed_ms) + " ms, limit " +
                     std::to_string(*criterion.time_limit_ms) + " ms";
        }
        if (!ok) {
            ++failures;
        }
        std::string timing = std::to_string(elapsed_ms) + " ms";
        if (criterion.time_limit_ms) {
            timing += ", limit " + std::to_string(*criterion.time_limit_ms) + " ms";
        }
        std::printf("%s  %d  %s (%s)%s%s\n", ok ? "PASS" : "FAIL", criterion.number,
                    criterion.name.c_str(), timing.c_str(), detail.empty() ? "" : " -- ",
                    detail.c_str());
    }
    return failures;
}
