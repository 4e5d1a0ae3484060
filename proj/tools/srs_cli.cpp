// srs: construct, verify, and statistically test simple sampler mappings
// over finite population spaces.
//
// Exit codes: 0 = success or property holds, 1 = a checked property fails,
// 2 = usage or input error.

#include "srs/srs.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct OutputOptions {
    bool json = false;
};

void emit_report(const OutputOptions& out, const nlohmann::json& j, const std::string& text) {
    if (out.json) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << text;
    }
}

srs::IndexTuple parse_index_list(const std::string& text, std::size_t population_size,
                                 std::size_t arity) {
    return srs::parse_tuple_line(text, population_size, arity);
}

int run_construct_discrete(std::size_t size, std::size_t arity, const std::string& out_path) {
    srs::FiniteSampler s = srs::discrete_construction(size, arity);
    srs::save_json_file(out_path, srs::sampler_to_json(s));
    return 0;
}

int run_construct_product(const std::string& population_path, std::size_t arity,
                          const std::string& out_path) {
    srs::PopulationFile pop = srs::load_population_file(population_path);
    srs::FiniteSampler s = srs::product_construction(pop.space, arity);
    srs::save_json_file(out_path, srs::sampler_to_json(s));
    return 0;
}

int run_verify(const OutputOptions& out, const std::string& population_path,
               const std::string& sampler_path, bool rectangles) {
    srs::PopulationFile pop = srs::load_population_file(population_path);
    srs::FiniteSampler s = srs::load_sampler_file(sampler_path);
    srs::SimplenessReport report = srs::simpleness_report(s, pop.space);

    nlohmann::json j = report;
    std::string text = srs::render_text(report);
    if (rectangles) {
        bool agree = srs::exhaustive_rectangle_check(s, pop.space) == report.is_simple;
        j["rectangles_agree"] = agree;
        text += "rectangles_agree: " + std::string(agree ? "true" : "false") + "\n";
    }
    emit_report(out, j, text);
    return report.is_simple ? 0 : 1;
}

int run_iid(const OutputOptions& out, const std::string& population_path,
            const std::string& sampler_path, const std::string& variable) {
    srs::PopulationFile pop = srs::load_population_file(population_path);
    srs::FiniteSampler s = srs::load_sampler_file(sampler_path);
    srs::IidReport report = srs::check_proposition1(s, pop.space, pop.variable(variable));
    emit_report(out, report, srs::render_text(report));
    return report.all_pass() ? 0 : 1;
}

int run_sample(const std::string& construction, std::size_t size, std::size_t arity,
               std::uint64_t count, std::uint64_t seed, const std::string& emit_path) {
    srs::GeneratorKind kind = srs::parse_generator_kind(construction);
    std::ofstream file;
    std::ostream* sink = &std::cout;
    if (!emit_path.empty()) {
        file.open(emit_path);
        if (!file) {
            throw std::invalid_argument("cannot write " + emit_path);
        }
        sink = &file;
    }
    srs::sample_tuple_stream(kind, size, arity, count, seed, [&](const srs::IndexTuple& tuple) {
        srs::write_tuple_line(*sink, tuple);
    });
    return 0;
}

int run_gof(const OutputOptions& out, const std::string& counts_path, std::size_t size,
            std::size_t arity, double alpha) {
    std::ifstream in(counts_path);
    if (!in) {
        throw std::invalid_argument("cannot open " + counts_path);
    }
    srs::FrequencyTable observed = srs::read_tuple_stream(in, size, arity);
    srs::TupleDistribution expected = srs::uniform_tuple_distribution(size, arity);
    srs::GofResult result = srs::chi_square_test(observed, expected, alpha);
    emit_report(out, result, srs::render_text(result));
    return result.reject ? 1 : 0;
}

int run_subset_prob(const OutputOptions& out, const std::string& sampler_path,
                    const std::string& subset_text) {
    srs::FiniteSampler s = srs::load_sampler_file(sampler_path);
    srs::IndexTuple subset = parse_index_list(subset_text, s.population_size(), s.sample_size());
    srs::Rational p = srs::subset_selection_probability(s, subset);
    emit_report(out, nlohmann::json{{"probability", srs::format_rational(p)}},
                "probability: " + srs::format_rational(p) + "\n");
    return 0;
}

int run_cdf(const OutputOptions& out, const std::string& population_path,
            const std::string& variable, const std::string& u_text) {
    srs::PopulationFile pop = srs::load_population_file(population_path);
    srs::Rational u = srs::parse_rational(u_text);
    srs::Rational p = srs::cdf(pop.space, pop.variable(variable), u);
    emit_report(out, nlohmann::json{{"cdf", srs::format_rational(p)}},
                "cdf: " + srs::format_rational(p) + "\n");
    return 0;
}

int run_cells(const OutputOptions& out, std::size_t size, std::size_t arity) {
    if (size == 0) {
        throw std::invalid_argument("population size must be at least 1");
    }
    if (arity == 0) {
        throw std::invalid_argument("sample size n must be at least 1");
    }
    srs::detail::tuple_count_or_throw(size, arity, srs::kDefaultEnumerationCap);
    nlohmann::json cells = nlohmann::json::array();
    std::string text;
    srs::IndexTuple tuple(arity, 0);
    do {
        srs::IntervalPreimage cell = srs::tuple_preimage_interval(tuple, size);
        if (out.json) {
            cells.push_back({{"tuple", tuple},
                             {"lo", srs::format_rational(cell.lo)},
                             {"hi", srs::format_rational(cell.hi)}});
        } else {
            text += srs::detail::format_tuple(tuple) + ": [" + srs::format_rational(cell.lo) +
                    ", " + srs::format_rational(cell.hi) + ")\n";
        }
    } while (srs::detail::next_tuple(tuple, size));
    emit_report(out, cells, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exact sampler-mapping toolkit: population and experiment spaces, simpleness\n"
        "verification, induced-sample iid checks, and seeded generator tests.\n"
        "Exit codes: 0 = success/property holds, 1 = property fails, 2 = usage/input error."};
    app.require_subcommand(1);

    OutputOptions out;
    bool plain = false;
    auto* json_flag = app.add_flag("--json", out.json, "emit reports as JSON objects");
    auto* plain_flag =
        app.add_flag("--plain", plain, "emit line-oriented plain text (the default)");
    json_flag->excludes(plain_flag);

    auto* construct = app.add_subcommand("construct", "build a sampler file");
    construct->require_subcommand(1);

    std::size_t cd_size = 0;
    std::size_t cd_n = 0;
    std::string cd_out;
    auto* cdisc = construct->add_subcommand(
        "discrete", "discrete generator construction over a classical population");
    cdisc->add_option("--size", cd_size, "population size N")->required();
    cdisc->add_option("--n", cd_n, "sample size n")->required();
    cdisc->add_option("--out", cd_out, "output sampler file")->required();

    std::string cp_population;
    std::size_t cp_n = 0;
    std::string cp_out;
    auto* cprod = construct->add_subcommand(
        "product", "n-fold product construction over a population file");
    cprod->add_option("--population", cp_population, "population file")->required();
    cprod->add_option("--n", cp_n, "sample size n")->required();
    cprod->add_option("--out", cp_out, "output sampler file")->required();

    std::string v_population;
    std::string v_sampler;
    bool v_rectangles = false;
    auto* verify = app.add_subcommand("verify", "check that a sampler is simple");
    verify->add_option("--population", v_population, "population file")->required();
    verify->add_option("--sampler", v_sampler, "sampler file")->required();
    verify->add_flag("--rectangles", v_rectangles,
                     "also run the literal all-rectangles check (N <= 4, n <= 2)");

    std::string i_population;
    std::string i_sampler;
    std::string i_variable;
    auto* iid = app.add_subcommand("iid", "check the induced sample variables for iid");
    iid->add_option("--population", i_population, "population file")->required();
    iid->add_option("--sampler", i_sampler, "sampler file")->required();
    iid->add_option("--variable", i_variable, "variable name from the population file")
        ->required();

    std::string s_construction;
    std::size_t s_size = 0;
    std::size_t s_n = 0;
    std::uint64_t s_count = 0;
    std::uint64_t s_seed = 0;
    std::string s_emit;
    auto* sample = app.add_subcommand("sample", "draw seeded tuples through a construction");
    sample->add_option("--construction", s_construction, "discrete or continuous")->required();
    sample->add_option("--size", s_size, "population size N")->required();
    sample->add_option("--n", s_n, "sample size n")->required();
    sample->add_option("--count", s_count, "number of tuples to draw")->required();
    sample->add_option("--seed", s_seed, "generator seed")->required();
    sample->add_option("--emit", s_emit, "write tuples to this file instead of stdout");

    std::string g_counts;
    std::size_t g_size = 0;
    std::size_t g_n = 0;
    double g_alpha = 0.0;
    auto* gof = app.add_subcommand("gof", "chi-square fit of a tuple stream against uniform");
    gof->add_option("--counts", g_counts, "tuple stream file")->required();
    gof->add_option("--size", g_size, "population size N")->required();
    gof->add_option("--n", g_n, "sample size n")->required();
    gof->add_option("--alpha", g_alpha, "significance level: 0.05, 0.01, or 0.001")->required();

    std::string sp_sampler;
    std::string sp_subset;
    auto* subset_prob =
        app.add_subcommand("subset-prob", "probability that the sample equals a given subset");
    subset_prob->add_option("--sampler", sp_sampler, "sampler file")->required();
    subset_prob->add_option("--subset", sp_subset, "comma-separated distinct element indices")
        ->required();

    std::string f_population;
    std::string f_variable;
    std::string f_u;
    auto* cdf_cmd = app.add_subcommand("cdf", "P(X < u) with the strict-below convention");
    cdf_cmd->add_option("--population", f_population, "population file")->required();
    cdf_cmd->add_option("--variable", f_variable, "variable name from the population file")
        ->required();
    cdf_cmd->add_option("--u", f_u, "threshold, as \"p/q\" or an integer")->required();

    std::size_t ce_size = 0;
    std::size_t ce_n = 0;
    auto* cells = app.add_subcommand("cells", "preimage interval of every digit tuple");
    cells->add_option("--size", ce_size, "population size N")->required();
    cells->add_option("--n", ce_n, "sample size n")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (construct->parsed()) {
            if (cdisc->parsed()) {
                return run_construct_discrete(cd_size, cd_n, cd_out);
            }
            return run_construct_product(cp_population, cp_n, cp_out);
        }
        if (verify->parsed()) {
            return run_verify(out, v_population, v_sampler, v_rectangles);
        }
        if (iid->parsed()) {
            return run_iid(out, i_population, i_sampler, i_variable);
        }
        if (sample->parsed()) {
            return run_sample(s_construction, s_size, s_n, s_count, s_seed, s_emit);
        }
        if (gof->parsed()) {
            return run_gof(out, g_counts, g_size, g_n, g_alpha);
        }
        if (subset_prob->parsed()) {
            return run_subset_prob(out, sp_sampler, sp_subset);
        }
        if (cdf_cmd->parsed()) {
            return run_cdf(out, f_population, f_variable, f_u);
        }
        if (cells->parsed()) {
            return run_cells(out, ce_size, ce_n);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
}
