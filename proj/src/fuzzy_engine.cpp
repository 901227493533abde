#include "fuzzyplan/fuzzy_engine.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <unordered_set>

#include "fuzzyplan/errors.hpp"
#include "fuzzyplan/kernels.hpp"

namespace fuzzyplan {

using nlohmann::json;

double membership(const TriangularMF& mf, double x)
{
    return kernels::triangle(x, mf.a, mf.b, mf.c);
}

std::size_t LinguisticVariable::label_index(std::string_view label) const
{
    for (std::size_t i = 0; i < mfs.size(); ++i) {
        if (mfs[i].label == label) {
            return i;
        }
    }
    throw ValidationError("variable " + name + ": unknown label \"" + std::string(label) + "\"");
}

namespace {

void check_variable(const LinguisticVariable& v, bool requireCoverage)
{
    const auto where = "variable " + v.name;
    if (v.name.empty()) {
        throw ValidationError("fuzzy variable with empty name");
    }
    if (!(v.hi > v.lo)) {
        throw ValidationError(where + ": universe upper bound must exceed lower bound");
    }
    if (v.mfs.empty()) {
        throw ValidationError(where + ": no membership functions");
    }
    std::unordered_set<std::string> labels;
    for (const auto& mf : v.mfs) {
        if (!labels.insert(mf.label).second) {
            throw ValidationError(where + ": duplicate label \"" + mf.label + "\"");
        }
        if (!(mf.a <= mf.b && mf.b <= mf.c)) {
            throw ValidationError(where + "." + mf.label + ": expected a <= b <= c");
        }
    }
    if (!requireCoverage) {
        for (const auto& mf : v.mfs) {
            if (mf.c < v.lo || mf.a > v.hi) {
                throw ValidationError(where + "." + mf.label + ": lies outside the universe");
            }
        }
        return;
    }
    // Coverage: the upper envelope of the MFs is piecewise linear, so it is
    // positive everywhere iff it is positive at every breakpoint and at the
    // midpoint between consecutive breakpoints.
    std::vector<double> points = {v.lo, v.hi};
    for (const auto& mf : v.mfs) {
        for (double p : {mf.a, mf.b, mf.c}) {
            if (p > v.lo && p < v.hi) {
                points.push_back(p);
            }
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    auto covered = [&](double x) {
        return std::any_of(v.mfs.begin(), v.mfs.end(), [&](const TriangularMF& mf) { return membership(mf, x) > 0.0; });
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!covered(points[i]) || (i + 1 < points.size() && !covered(0.5 * (points[i] + points[i + 1])))) {
            throw ValidationError(where + ": membership functions do not cover the universe");
        }
    }
}

std::size_t find_variable(const std::vector<LinguisticVariable>& vars, std::string_view name, const char* kind)
{
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].name == name) {
            return i;
        }
    }
    throw ValidationError(std::string("unknown ") + kind + " variable \"" + std::string(name) + "\"");
}

} // namespace

FuzzySystem::FuzzySystem(std::vector<LinguisticVariable> inputs, std::vector<LinguisticVariable> outputs,
                         std::vector<FuzzyRule> rules)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), rules_(std::move(rules))
{
    if (inputs_.empty() || outputs_.empty()) {
        throw ValidationError("fuzzy system needs at least one input and one output");
    }
    if (rules_.empty()) {
        throw ValidationError("fuzzy system rule base is empty");
    }
    std::unordered_set<std::string> names;
    for (const auto& v : inputs_) {
        check_variable(v, true);
        if (!names.insert(v.name).second) {
            throw ValidationError("duplicate variable \"" + v.name + "\"");
        }
    }
    for (const auto& v : outputs_) {
        check_variable(v, false);
        if (!names.insert(v.name).second) {
            throw ValidationError("duplicate variable \"" + v.name + "\"");
        }
    }
    for (const auto& r : rules_) {
        if (r.antecedents.empty()) {
            throw ValidationError("rule without antecedents");
        }
        CompiledRule cr;
        for (const auto& [var, label] : r.antecedents) {
            const auto vi = find_variable(inputs_, var, "input");
            cr.terms.emplace_back(vi, inputs_[vi].label_index(label));
        }
        cr.output = find_variable(outputs_, r.consequent.first, "output");
        cr.mf = outputs_[cr.output].label_index(r.consequent.second);
        compiled_.push_back(std::move(cr));
    }
}

std::size_t FuzzySystem::input_index(std::string_view name) const
{
    return find_variable(inputs_, name, "input");
}

std::size_t FuzzySystem::output_index(std::string_view name) const
{
    return find_variable(outputs_, name, "output");
}

std::vector<double> FuzzySystem::consequent_levels(std::span<const double> crisp, std::size_t output) const
{
    if (crisp.size() != inputs_.size()) {
        throw ValidationError("expected " + std::to_string(inputs_.size()) + " crisp inputs, got "
                              + std::to_string(crisp.size()));
    }
    std::vector<double> levels(outputs_[output].mfs.size(), 0.0);
    for (const auto& rule : compiled_) {
        if (rule.output != output) {
            continue;
        }
        double strength = 1.0;
        for (const auto& [vi, mi] : rule.terms) {
            const auto& var = inputs_[vi];
            const double x = std::clamp(crisp[vi], var.lo, var.hi);
            strength = std::min(strength, membership(var.mfs[mi], x));
        }
        levels[rule.mf] = std::max(levels[rule.mf], strength);
    }
    return levels;
}

std::vector<double> FuzzySystem::infer_all(std::span<const double> crisp) const
{
    std::vector<double> out;
    out.reserve(outputs_.size());
    for (std::size_t o = 0; o < outputs_.size(); ++o) {
        out.push_back(infer(crisp, o));
    }
    return out;
}

double FuzzySystem::infer(std::span<const double> crisp, std::size_t output) const
{
    const auto levels = consequent_levels(crisp, output);
    const auto& var = outputs_[output];

    std::array<double, 16> a{}, b{}, c{}, lvl{};
    std::vector<double> va, vb, vc, vl;
    std::size_t k = 0;
    const bool small = levels.size() <= a.size();
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] <= 0.0) {
            continue;
        }
        const auto& mf = var.mfs[i];
        if (small) {
            a[k] = mf.a, b[k] = mf.b, c[k] = mf.c, lvl[k] = levels[i];
        } else {
            va.push_back(mf.a), vb.push_back(mf.b), vc.push_back(mf.c), vl.push_back(levels[i]);
        }
        ++k;
    }
    if (k == 0) {
        throw IncompleteRuleBase("no rule fires for output " + var.name);
    }
    const kernels::ClippedSets sets = small
        ? kernels::ClippedSets{{a.data(), k}, {b.data(), k}, {c.data(), k}, {lvl.data(), k}}
        : kernels::ClippedSets{va, vb, vc, vl};
    const double step = (var.hi - var.lo) / static_cast<double>(kGridPoints - 1);
    const auto sums = kernels::centroid_sums(var.lo, step, kGridPoints, sets);
    if (!(sums.mass > 0.0)) {
        throw IncompleteRuleBase("aggregated set for output " + var.name + " has no mass on the grid");
    }
    return std::clamp(sums.moment / sums.mass, var.lo, var.hi);
}

double FuzzySystem::infer(const std::map<std::string, double>& crisp, std::string_view output) const
{
    std::vector<double> values(inputs_.size());
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
        auto it = crisp.find(inputs_[i].name);
        if (it == crisp.end()) {
            throw ValidationError("missing crisp input \"" + inputs_[i].name + "\"");
        }
        values[i] = it->second;
    }
    return infer(values, output_index(output));
}

bool FuzzySystem::operator==(const FuzzySystem& other) const
{
    return inputs_ == other.inputs_ && outputs_ == other.outputs_ && rules_ == other.rules_;
}

// ---------------------------------------------------------------------------
// Default systems

namespace {

LinguisticVariable three_level(std::string name, const char* low, const char* mid, const char* high)
{
    return {std::move(name), 0.0, 1.0, {{low, 0.0, 0.0, 0.5}, {mid, 0.0, 0.5, 1.0}, {high, 0.5, 1.0, 1.0}}};
}

LinguisticVariable multiplier(std::string name)
{
    return {std::move(name), 0.5, 2.0,
            {{"decrease", 0.5, 0.5, 1.0}, {"hold", 0.5, 1.0, 1.5}, {"increase", 1.0, 2.0, 2.0}}};
}

} // namespace

FuzzySystem build_ranking_system()
{
    std::vector<LinguisticVariable> inputs = {
        three_level("lN", "bad", "medium", "good"),
        three_level("oN", "bad", "medium", "good"),
        three_level("gN", "bad", "medium", "good"),
    };
    // Symmetric, non-overlapping output sets on grid points: clipping a set
    // never moves its centroid, which keeps the ranking monotone.
    LinguisticVariable quality{"quality", 0.0, 1.0,
                               {{"bad", 0.0, 0.165, 0.33}, {"medium", 0.33, 0.5, 0.67}, {"good", 0.67, 0.835, 1.0}}};

    const std::array<const char*, 3> labels = {"bad", "medium", "good"};
    std::vector<FuzzyRule> rules;
    for (int l = 0; l < 3; ++l) {
        for (int o = 0; o < 3; ++o) {
            for (int g = 0; g < 3; ++g) {
                const int bad = (l == 0) + (o == 0) + (g == 0);
                const char* out = "medium";
                if (l == 2 && o == 2 && g == 2) {
                    out = "good";
                } else if (l == 0 || bad >= 2) {
                    out = "bad";
                }
                rules.push_back({{{"lN", labels[l]}, {"oN", labels[o]}, {"gN", labels[g]}}, {"quality", out}});
            }
        }
    }
    return FuzzySystem(std::move(inputs), {std::move(quality)}, std::move(rules));
}

FuzzySystem build_controller_system()
{
    std::vector<LinguisticVariable> inputs = {
        three_level("stagnation", "low", "medium", "high"),
        three_level("diversity", "low", "medium", "high"),
    };
    std::vector<LinguisticVariable> outputs = {multiplier("mutation"), multiplier("crossover")};

    // Rows: stagnation low/medium/high. Columns: diversity low/medium/high.
    const std::array<std::array<const char*, 3>, 3> mutation = {{
        {"increase", "hold", "decrease"},
        {"increase", "hold", "hold"},
        {"increase", "increase", "increase"},
    }};
    const std::array<const char*, 3> levels = {"low", "medium", "high"};
    std::vector<FuzzyRule> rules;
    for (int s = 0; s < 3; ++s) {
        for (int d = 0; d < 3; ++d) {
            rules.push_back({{{"stagnation", levels[s]}, {"diversity", levels[d]}}, {"mutation", mutation[s][d]}});
        }
    }
    rules.push_back({{{"diversity", "low"}}, {"crossover", "decrease"}});
    rules.push_back({{{"diversity", "medium"}}, {"crossover", "hold"}});
    rules.push_back({{{"diversity", "high"}}, {"crossover", "increase"}});
    return FuzzySystem(std::move(inputs), std::move(outputs), std::move(rules));
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json variable_to_json(const LinguisticVariable& v)
{
    json mfs = json::array();
    for (const auto& mf : v.mfs) {
        mfs.push_back({{"label", mf.label}, {"abc", {mf.a, mf.b, mf.c}}});
    }
    return {{"name", v.name}, {"universe", {v.lo, v.hi}}, {"mfs", std::move(mfs)}};
}

LinguisticVariable variable_from_json(const json& j)
{
    LinguisticVariable v;
    v.name = j.at("name").get<std::string>();
    const auto& u = j.at("universe");
    if (!u.is_array() || u.size() != 2) {
        throw ParseError("variable " + v.name + ": universe must be [lo, hi]");
    }
    v.lo = u[0].get<double>();
    v.hi = u[1].get<double>();
    for (const auto& m : j.at("mfs")) {
        const auto& abc = m.at("abc");
        if (!abc.is_array() || abc.size() != 3) {
            throw ParseError("variable " + v.name + ": abc must be [a, b, c]");
        }
        v.mfs.push_back({m.at("label").get<std::string>(), abc[0].get<double>(), abc[1].get<double>(),
                         abc[2].get<double>()});
    }
    return v;
}

} // namespace

json system_to_json(const FuzzySystem& fs)
{
    json inputs = json::array();
    for (const auto& v : fs.inputs()) {
        inputs.push_back(variable_to_json(v));
    }
    json outputs = json::array();
    for (const auto& v : fs.outputs()) {
        outputs.push_back(variable_to_json(v));
    }
    json rules = json::array();
    for (const auto& r : fs.rules()) {
        json ante = json::array();
        for (const auto& [var, label] : r.antecedents) {
            ante.push_back({var, label});
        }
        rules.push_back({{"if", std::move(ante)}, {"then", {r.consequent.first, r.consequent.second}}});
    }
    return {{"inputs", std::move(inputs)}, {"outputs", std::move(outputs)}, {"rules", std::move(rules)}};
}

FuzzySystem system_from_json(const json& doc)
{
    try {
        std::vector<LinguisticVariable> inputs, outputs;
        for (const auto& v : doc.at("inputs")) {
            inputs.push_back(variable_from_json(v));
        }
        for (const auto& v : doc.at("outputs")) {
            outputs.push_back(variable_from_json(v));
        }
        std::vector<FuzzyRule> rules;
        for (const auto& r : doc.at("rules")) {
            FuzzyRule rule;
            for (const auto& term : r.at("if")) {
                rule.antecedents.emplace_back(term.at(0).get<std::string>(), term.at(1).get<std::string>());
            }
            const auto& then = r.at("then");
            rule.consequent = {then.at(0).get<std::string>(), then.at(1).get<std::string>()};
            rules.push_back(std::move(rule));
        }
        return FuzzySystem(std::move(inputs), std::move(outputs), std::move(rules));
    } catch (const json::exception& e) {
        throw ParseError(std::string("fuzzy system: ") + e.what());
    }
}

json fuzzy_config_to_json(const FuzzyConfig& cfg)
{
    return {{"ranking", system_to_json(cfg.ranking)}, {"controller", system_to_json(cfg.controller)}};
}

FuzzyConfig fuzzy_config_from_json(const json& doc)
{
    FuzzyConfig cfg;
    if (!doc.is_object()) {
        throw ParseError("fuzzy config: expected an object");
    }
    if (auto it = doc.find("ranking"); it != doc.end()) {
        cfg.ranking = system_from_json(*it);
    }
    if (auto it = doc.find("controller"); it != doc.end()) {
        cfg.controller = system_from_json(*it);
    }
    // Callers address variables by these names.
    for (const char* name : {"lN", "oN", "gN"}) {
        cfg.ranking.input_index(name);
    }
    cfg.ranking.output_index("quality");
    cfg.controller.input_index("stagnation");
    cfg.controller.input_index("diversity");
    cfg.controller.output_index("mutation");
    cfg.controller.output_index("crossover");
    return cfg;
}

FuzzyConfig load_fuzzy_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open fuzzy config " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("fuzzy config " + path.string() + ": " + e.what());
    }
    return fuzzy_config_from_json(doc);
}

} // namespace fuzzyplan
