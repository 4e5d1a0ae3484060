#pragma once

#include "srs/iid.hpp"
#include "srs/population.hpp"
#include "srs/rational.hpp"
#include "srs/sampler.hpp"
#include "srs/stats.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace srs {

// ---------------------------------------------------------------------------
// Rational fields
//
// Rationals travel as "p/q" or integer strings ("1/3", "0", "-2"). Bare JSON
// integers are accepted on input; output always uses strings.
// ---------------------------------------------------------------------------

inline Rational rational_from_json(const nlohmann::json& j, const std::string& context) {
    if (j.is_number_integer()) {
        return Rational(Integer(j.get<std::int64_t>()));
    }
    if (!j.is_string()) {
        throw std::invalid_argument(context + ": expected a rational string such as \"1/3\"");
    }
    auto r = detail::try_parse_rational(j.get<std::string>());
    if (!r) {
        throw std::invalid_argument(context + ": invalid rational literal \"" +
                                    j.get<std::string>() + "\"");
    }
    return *r;
}

inline std::vector<Rational> rational_list_from_json(const nlohmann::json& j,
                                                     const std::string& context) {
    if (!j.is_array()) {
        throw std::invalid_argument(context + ": expected an array of rational strings");
    }
    std::vector<Rational> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(rational_from_json(j[i], context + "[" + std::to_string(i) + "]"));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Population files
//
//   {"size": N,
//    "weights": ["1/3","1/3","1/3"] | "classical",
//    "labels": ["a","b","c"],                      optional
//    "variables": {"X": ["0","1/2","1"]}}          optional
// ---------------------------------------------------------------------------

struct PopulationFile {
    FinitePopulationSpace space;
    std::map<std::string, RandomVariable> variables;

    const RandomVariable& variable(const std::string& name) const {
        auto it = variables.find(name);
        if (it == variables.end()) {
            throw std::invalid_argument("population file defines no variable named \"" + name +
                                        "\"");
        }
        return it->second;
    }
};

inline PopulationFile population_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("population file must be a JSON object");
    }
    if (!j.contains("size") || !j["size"].is_number_unsigned()) {
        throw std::invalid_argument("population file needs a positive integer \"size\"");
    }
    const auto size = j["size"].get<std::size_t>();
    if (size == 0) {
        throw std::invalid_argument("population size must be at least 1");
    }
    if (!j.contains("weights")) {
        throw std::invalid_argument("population file needs \"weights\"");
    }

    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) {
            throw std::invalid_argument("\"labels\" must be an array of strings");
        }
        for (const auto& l : j["labels"]) {
            labels.push_back(l.get<std::string>());
        }
    }

    PopulationFile file{FinitePopulationSpace::classical(1), {}};
    if (j["weights"].is_string()) {
        if (j["weights"].get<std::string>() != "classical") {
            throw std::invalid_argument("\"weights\" must be an array or the string \"classical\"");
        }
        file.space = FinitePopulationSpace::classical(size);
        file.space.set_labels(std::move(labels));
    } else {
        auto weights = rational_list_from_json(j["weights"], "weights");
        if (weights.size() != size) {
            throw std::invalid_argument("\"weights\" lists " + std::to_string(weights.size()) +
                                        " entries but \"size\" is " + std::to_string(size));
        }
        file.space = FinitePopulationSpace(std::move(weights), std::move(labels));
    }

    if (j.contains("variables")) {
        if (!j["variables"].is_object()) {
            throw std::invalid_argument("\"variables\" must map names to value arrays");
        }
        for (const auto& [name, values] : j["variables"].items()) {
            auto list = rational_list_from_json(values, "variables." + name);
            if (list.size() != size) {
                throw std::invalid_argument("variable \"" + name + "\" lists " +
                                            std::to_string(list.size()) +
                                            " values but the population has " +
                                            std::to_string(size) + " elements");
            }
            file.variables.emplace(name, RandomVariable(std::move(list)));
        }
    }
    return file;
}

inline nlohmann::json population_to_json(const FinitePopulationSpace& space,
                                         const std::map<std::string, RandomVariable>& variables = {}) {
    nlohmann::json j;
    j["size"] = space.size();
    if (space.is_classical()) {
        j["weights"] = "classical";
    } else {
        auto& weights = j["weights"] = nlohmann::json::array();
        for (std::size_t i = 0; i < space.size(); ++i) {
            weights.push_back(format_rational(space.weight(i)));
        }
    }
    if (!space.labels().empty()) {
        j["labels"] = space.labels();
    }
    if (!variables.empty()) {
        auto& vars = j["variables"] = nlohmann::json::object();
        for (const auto& [name, x] : variables) {
            auto& values = vars[name] = nlohmann::json::array();
            for (const Rational& v : x.values()) {
                values.push_back(format_rational(v));
            }
        }
    }
    return j;
}

// ---------------------------------------------------------------------------
// Sampler files
//
//   {"n": 2,
//    "population_size": 3,
//    "experiment": {"weights": ["1/2","1/2"]} | {"uniform": M},
//    "table": [[0,1],[2,0]]}
// ---------------------------------------------------------------------------

inline FiniteSampler sampler_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw std::invalid_argument("sampler file must be a JSON object");
    }
    for (const char* key : {"n", "population_size", "experiment", "table"}) {
        if (!j.contains(key)) {
            throw std::invalid_argument(std::string("sampler file needs \"") + key + "\"");
        }
    }
    if (!j["n"].is_number_unsigned() || j["n"].get<std::size_t>() == 0) {
        throw std::invalid_argument("\"n\" must be a positive integer");
    }
    if (!j["population_size"].is_number_unsigned() ||
        j["population_size"].get<std::size_t>() == 0) {
        throw std::invalid_argument("\"population_size\" must be a positive integer");
    }
    const auto arity = j["n"].get<std::size_t>();
    const auto population_size = j["population_size"].get<std::size_t>();

    const auto& je = j["experiment"];
    if (!je.is_object() || (je.contains("weights") == je.contains("uniform"))) {
        throw std::invalid_argument(
            "\"experiment\" must carry exactly one of \"weights\" or \"uniform\"");
    }
    FiniteExperimentSpace experiment = FiniteExperimentSpace::uniform(1);
    if (je.contains("uniform")) {
        if (!je["uniform"].is_number_unsigned() || je["uniform"].get<std::size_t>() == 0) {
            throw std::invalid_argument("\"uniform\" must be a positive atom count");
        }
        experiment = FiniteExperimentSpace::uniform(je["uniform"].get<std::size_t>());
    } else {
        experiment =
            FiniteExperimentSpace(rational_list_from_json(je["weights"], "experiment.weights"));
    }

    if (!j["table"].is_array() || j["table"].size() != experiment.size()) {
        throw std::invalid_argument("\"table\" must list one tuple per experiment atom (" +
                                    std::to_string(experiment.size()) + ")");
    }
    std::vector<std::size_t> table;
    table.reserve(experiment.size() * arity);
    for (std::size_t row = 0; row < j["table"].size(); ++row) {
        const auto& jt = j["table"][row];
        if (!jt.is_array() || jt.size() != arity) {
            throw std::invalid_argument("table row " + std::to_string(row) +
                                        " must be a length-" + std::to_string(arity) + " tuple");
        }
        for (const auto& entry : jt) {
            if (!entry.is_number_unsigned()) {
                throw std::invalid_argument("table row " + std::to_string(row) +
                                            " holds a non-index entry");
            }
            table.push_back(entry.get<std::size_t>());
        }
    }
    return FiniteSampler(std::move(experiment), population_size, arity, std::move(table));
}

inline nlohmann::json sampler_to_json(const FiniteSampler& s) {
    nlohmann::json j;
    j["n"] = s.sample_size();
    j["population_size"] = s.population_size();
    if (s.experiment().is_uniform()) {
        j["experiment"] = {{"uniform", s.experiment().size()}};
    } else {
        auto weights = nlohmann::json::array();
        for (std::size_t atom = 0; atom < s.experiment().size(); ++atom) {
            weights.push_back(format_rational(s.experiment().weight(atom)));
        }
        j["experiment"] = {{"weights", std::move(weights)}};
    }
    auto& table = j["table"] = nlohmann::json::array();
    for (std::size_t atom = 0; atom < s.experiment().size(); ++atom) {
        auto row = s.tuple_at(atom);
        table.push_back(nlohmann::json(std::vector<std::size_t>(row.begin(), row.end())));
    }
    return j;
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open " + path.string());
    }
    // nlohmann reports line/column in the exception message.
    return nlohmann::json::parse(in);
}

inline void save_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

inline PopulationFile load_population_file(const std::filesystem::path& path) {
    return population_from_json(load_json_file(path));
}

inline FiniteSampler load_sampler_file(const std::filesystem::path& path) {
    return sampler_from_json(load_json_file(path));
}

// ---------------------------------------------------------------------------
// Tuple streams: one tuple per line, comma-separated 0-based indices,
// no whitespace.
// ---------------------------------------------------------------------------

inline void write_tuple_line(std::ostream& out, std::span<const std::size_t> tuple) {
    out << detail::format_tuple(tuple) << '\n';
}

inline IndexTuple parse_tuple_line(const std::string& line, std::size_t population_size,
                                   std::size_t arity) {
    IndexTuple tuple;
    tuple.reserve(arity);
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t comma = line.find(',', pos);
        std::string field = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (field.empty() || !detail::all_digits(field)) {
            throw std::invalid_argument("malformed tuple line \"" + line + "\"");
        }
        std::size_t value = std::stoull(field);
        if (value >= population_size) {
            throw std::out_of_range("tuple entry " + field +
                                    " out of range for population of size " +
                                    std::to_string(population_size));
        }
        tuple.push_back(value);
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    if (tuple.size() != arity) {
        throw std::invalid_argument("tuple line \"" + line + "\" has " +
                                    std::to_string(tuple.size()) + " entries, expected " +
                                    std::to_string(arity));
    }
    return tuple;
}

inline FrequencyTable read_tuple_stream(std::istream& in, std::size_t population_size,
                                        std::size_t arity) {
    FrequencyTable table;
    table.arity = arity;
    table.population_size = population_size;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        ++table.counts[parse_tuple_line(line, population_size, arity)];
        ++table.total;
    }
    return table;
}

// ---------------------------------------------------------------------------
// Report rendering. Text output is line-oriented with exact rationals as
// "p/q"; JSON output round-trips through the from_json overloads below.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

inline std::string format_value_tuple(const std::vector<Rational>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_rational(values[i]);
    }
    return out;
}

}  // namespace detail

inline std::string render_text(const SimplenessReport& r) {
    std::string out;
    out += "simple: " + std::string(r.is_simple ? "true" : "false") + "\n";
    out += "worst_tuple: " +
           (r.worst_tuple ? detail::format_tuple(*r.worst_tuple) : std::string("none")) + "\n";
    out += "worst_deviation: " + format_rational(r.worst_deviation) + "\n";
    out += "checked_rectangles: " + std::to_string(r.checked_rectangles) + "\n";
    return out;
}

inline std::string render_text(const IidReport& r) {
    auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    std::string out;
    out += "marginals_identical: " + flag(r.marginals_identical) + "\n";
    out += "marginals_match_population: " + flag(r.marginals_match_population) + "\n";
    out += "independent: " + flag(r.independent) + "\n";
    out += "witness: " + (r.witness ? detail::format_value_tuple(*r.witness) : std::string("none")) +
           "\n";
    return out;
}

inline std::string render_text(const GofResult& r) {
    char alpha_buf[32];
    std::snprintf(alpha_buf, sizeof(alpha_buf), "%g", r.alpha);
    std::string out;
    out += "statistic: " + detail::format_double(r.statistic) + "\n";
    out += "degrees_of_freedom: " + std::to_string(r.degrees_of_freedom) + "\n";
    out += "threshold: " + detail::format_double(r.threshold) + "\n";
    out += "alpha: " + std::string(alpha_buf) + "\n";
    out += "reject: " + std::string(r.reject ? "true" : "false") + "\n";
    return out;
}

inline void to_json(nlohmann::json& j, const SimplenessReport& r) {
    j = nlohmann::json{{"is_simple", r.is_simple},
                       {"worst_tuple", nullptr},
                       {"worst_deviation", format_rational(r.worst_deviation)},
                       {"checked_rectangles", r.checked_rectangles}};
    if (r.worst_tuple) {
        j["worst_tuple"] = *r.worst_tuple;
    }
}

inline void from_json(const nlohmann::json& j, SimplenessReport& r) {
    r.is_simple = j.at("is_simple").get<bool>();
    r.worst_tuple.reset();
    if (!j.at("worst_tuple").is_null()) {
        r.worst_tuple = j.at("worst_tuple").get<IndexTuple>();
    }
    r.worst_deviation = rational_from_json(j.at("worst_deviation"), "worst_deviation");
    r.checked_rectangles = j.at("checked_rectangles").get<std::uint64_t>();
}

inline void to_json(nlohmann::json& j, const IidReport& r) {
    j = nlohmann::json{{"marginals_identical", r.marginals_identical},
                       {"marginals_match_population", r.marginals_match_population},
                       {"independent", r.independent},
                       {"witness", nullptr}};
    if (r.witness) {
        auto values = nlohmann::json::array();
        for (const Rational& v : *r.witness) {
            values.push_back(format_rational(v));
        }
        j["witness"] = std::move(values);
    }
}

inline void from_json(const nlohmann::json& j, IidReport& r) {
    r.marginals_identical = j.at("marginals_identical").get<bool>();
    r.marginals_match_population = j.at("marginals_match_population").get<bool>();
    r.independent = j.at("independent").get<bool>();
    r.witness.reset();
    if (!j.at("witness").is_null()) {
        r.witness = rational_list_from_json(j.at("witness"), "witness");
    }
}

inline void to_json(nlohmann::json& j, const GofResult& r) {
    j = nlohmann::json{{"statistic", r.statistic},
                       {"degrees_of_freedom", r.degrees_of_freedom},
                       {"threshold", r.threshold},
                       {"reject", r.reject},
                       {"alpha", r.alpha}};
}

inline void from_json(const nlohmann::json& j, GofResult& r) {
    r.statistic = j.at("statistic").get<double>();
    r.degrees_of_freedom = j.at("degrees_of_freedom").get<std::size_t>();
    r.threshold = j.at("threshold").get<double>();
    r.reject = j.at("reject").get<bool>();
    r.alpha = j.at("alpha").get<double>();
}

}  // namespace srs
