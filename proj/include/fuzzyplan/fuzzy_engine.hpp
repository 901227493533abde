#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace fuzzyplan {

/// Triangle with feet a, c and peak b. a == b or b == c gives a shoulder.
struct TriangularMF {
    std::string label;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    bool operator==(const TriangularMF&) const = default;
};

double membership(const TriangularMF& mf, double x);

struct LinguisticVariable {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<TriangularMF> mfs;

    std::size_t label_index(std::string_view label) const; // throws ValidationError if unknown
    bool operator==(const LinguisticVariable&) const = default;
};

/// IF every (variable is label) in `antecedents` THEN (output is label).
struct FuzzyRule {
    std::vector<std::pair<std::string, std::string>> antecedents;
    std::pair<std::string, std::string> consequent;

    bool operator==(const FuzzyRule&) const = default;
};

/// Mamdani system: min conjunction, min implication, max aggregation and
/// centroid defuzzification over a fixed grid on each output universe.
///
/// Names and labels are resolved once at construction; inference then
/// works on indices. Inputs must cover their universe (some MF positive at
/// every point) so that every crisp input fires a rule. Outputs only need
/// their MFs to lie inside the universe.
class FuzzySystem {
public:
    static constexpr std::size_t kGridPoints = 201;

    FuzzySystem(std::vector<LinguisticVariable> inputs, std::vector<LinguisticVariable> outputs,
                std::vector<FuzzyRule> rules);

    const std::vector<LinguisticVariable>& inputs() const { return inputs_; }
    const std::vector<LinguisticVariable>& outputs() const { return outputs_; }
    const std::vector<FuzzyRule>& rules() const { return rules_; }

    std::size_t input_index(std::string_view name) const;
    std::size_t output_index(std::string_view name) const;

    /// Crisp inputs in declaration order; values are clamped to each
    /// universe. Returns one defuzzified value per output.
    std::vector<double> infer_all(std::span<const double> crisp) const;

    /// Single-output convenience over infer_all.
    double infer(std::span<const double> crisp, std::size_t output = 0) const;

    /// Inputs by name; every input must be present.
    double infer(const std::map<std::string, double>& crisp, std::string_view output) const;

    /// Firing strength reaching each label of `output` (max over rules).
    std::vector<double> consequent_levels(std::span<const double> crisp, std::size_t output) const;

    bool operator==(const FuzzySystem& other) const;

private:
    struct CompiledRule {
        std::vector<std::pair<std::size_t, std::size_t>> terms; // (input, mf)
        std::size_t output;
        std::size_t mf;
    };

    std::vector<LinguisticVariable> inputs_;
    std::vector<LinguisticVariable> outputs_;
    std::vector<FuzzyRule> rules_;
    std::vector<CompiledRule> compiled_;
};

/// Quality of a plan from normalized inputs lN, oN, gN on [0, 1].
FuzzySystem build_ranking_system();

/// Multipliers for mutation probability and crossover rate from
/// normalized stagnation and diversity.
FuzzySystem build_controller_system();

/// Both systems used by a run; serializable as one config file.
struct FuzzyConfig {
    FuzzySystem ranking = build_ranking_system();
    FuzzySystem controller = build_controller_system();
};

nlohmann::json system_to_json(const FuzzySystem& fs);
FuzzySystem system_from_json(const nlohmann::json& doc);

nlohmann::json fuzzy_config_to_json(const FuzzyConfig& cfg);
FuzzyConfig fuzzy_config_from_json(const nlohmann::json& doc);
FuzzyConfig load_fuzzy_config(const std::filesystem::path& path);

} // namespace fuzzyplan
