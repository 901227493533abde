#include "fuzzyplan/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iterator>
#include <mutex>
#include <thread>

#include "fuzzyplan/errors.hpp"
#include "fuzzyplan/oracle.hpp"

namespace fuzzyplan {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_number(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        return "nan";
    }
    return {buf, end};
}

std::string file_fingerprint(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
        h ^= static_cast<unsigned char>(*it);
        h *= 0x100000001b3ULL;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

void validate(const ExperimentSpec& spec)
{
    if (spec.runs < 1) {
        throw ValidationError("experiment: runs must be at least 1");
    }
    if (spec.modes.empty()) {
        throw ValidationError("experiment: at least one mode is required");
    }
    if (spec.workers < 1) {
        throw ValidationError("experiment: workers must be positive");
    }
    for (auto mode : spec.modes) {
        GAConfig cfg = spec.base;
        cfg.mode = mode;
        validate(cfg);
    }
}

// ---------------------------------------------------------------------------
// Spec / manifest JSON

namespace {

json config_to_json(const GAConfig& cfg)
{
    return {{"population", cfg.populationSize},
            {"mutation", cfg.mutationProb},
            {"crossover", cfg.crossoverRate},
            {"generations", cfg.maxGenerations},
            {"weights", {cfg.weights.feasible, cfg.weights.orientation, cfg.weights.gripper}},
            {"mutation_bounds", {cfg.mutationBounds.min, cfg.mutationBounds.max}},
            {"crossover_bounds", {cfg.crossoverBounds.min, cfg.crossoverBounds.max}},
            {"stagnation_window", cfg.stagnationWindow}};
}

ControllerBounds bounds_from_json(const json& j, const char* what)
{
    if (!j.is_array() || j.size() != 2) {
        throw ParseError(std::string(what) + ": expected [min, max]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

void config_from_json(const json& j, GAConfig& cfg)
{
    cfg.populationSize = j.value("population", cfg.populationSize);
    cfg.mutationProb = j.value("mutation", cfg.mutationProb);
    cfg.crossoverRate = j.value("crossover", cfg.crossoverRate);
    cfg.maxGenerations = j.value("generations", cfg.maxGenerations);
    cfg.stagnationWindow = j.value("stagnation_window", cfg.stagnationWindow);
    if (auto it = j.find("weights"); it != j.end()) {
        if (!it->is_array() || it->size() != 3) {
            throw ParseError("weights: expected [w1, w2, w3]");
        }
        cfg.weights = {(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>()};
    }
    if (auto it = j.find("mutation_bounds"); it != j.end()) {
        cfg.mutationBounds = bounds_from_json(*it, "mutation_bounds");
    }
    if (auto it = j.find("crossover_bounds"); it != j.end()) {
        cfg.crossoverBounds = bounds_from_json(*it, "crossover_bounds");
    }
}

} // namespace

ExperimentSpec spec_from_json(const json& doc, const fs::path& baseDir)
{
    try {
        if (!doc.is_object()) {
            throw ParseError("experiment: expected a JSON object");
        }
        ExperimentSpec spec;
        auto resolve = [&](const std::string& p) {
            fs::path path(p);
            return path.is_absolute() ? path : (baseDir / path).lexically_normal();
        };
        spec.product = resolve(doc.at("product").get<std::string>());
        for (const auto& m : doc.at("modes")) {
            const auto text = m.get<std::string>();
            auto mode = parse_mode(text);
            if (!mode) {
                throw ValidationError("experiment: unknown mode \"" + text + "\"");
            }
            spec.modes.push_back(*mode);
        }
        spec.runs = doc.value("runs", spec.runs);
        spec.base.seed = doc.value("seed", spec.base.seed);
        if (auto it = doc.find("config"); it != doc.end()) {
            config_from_json(*it, spec.base);
        }
        if (auto it = doc.find("target"); it != doc.end() && !it->is_null()) {
            spec.target = it->get<double>();
        }
        if (auto it = doc.find("fuzzy"); it != doc.end()) {
            spec.fuzzy = fuzzy_config_from_json(*it);
        } else if (auto p = doc.find("fuzzy_config"); p != doc.end()) {
            spec.fuzzy = load_fuzzy_config(resolve(p->get<std::string>()));
        }
        if (auto it = doc.find("product_fnv1a64"); it != doc.end()) {
            spec.expectedProductHash = it->get<std::string>();
        }
        if (auto it = doc.find("output"); it != doc.end()) {
            spec.outputDir = resolve(it->get<std::string>());
        }
        return spec;
    } catch (const json::exception& e) {
        throw ParseError(std::string("experiment: ") + e.what());
    }
}

ExperimentSpec load_experiment_spec(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open experiment file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("experiment " + path.string() + ": " + e.what());
    }
    return spec_from_json(doc, fs::absolute(path).parent_path());
}

// ---------------------------------------------------------------------------
// Running

namespace {

std::optional<double> resolve_target(const ExperimentSpec& spec, const ProductModel& model)
{
    if (spec.target) {
        return spec.target;
    }
    const auto& w = spec.base.weights;
    if (const auto& ref = model.reference_optimum();
        ref && ref->weights == std::array<double, 3>{w.feasible, w.orientation, w.gripper}) {
        return ref->fitness;
    }
    if (model.size() <= OracleOptions{}.cap) {
        return brute_force_optimal(model, w).optimalFitness;
    }
    return std::nullopt;
}

void aggregate(ModeReport& mode)
{
    mode.curve.clear();
    mode.successes = 0;
    mode.bestRun = 0;
    if (mode.runs.empty()) {
        mode.successRate = 0.0;
        return;
    }
    for (std::size_t r = 0; r < mode.runs.size(); ++r) {
        const auto& res = mode.runs[r].result;
        mode.successes += res.success ? 1 : 0;
        if (res.referenceFitness > mode.runs[mode.bestRun].result.referenceFitness) {
            mode.bestRun = r;
        }
    }
    mode.successRate = static_cast<double>(mode.successes) / static_cast<double>(mode.runs.size());

    const std::size_t gens = mode.runs.front().result.stats.size();
    const double count = static_cast<double>(mode.runs.size());
    for (std::size_t g = 0; g < gens; ++g) {
        CurvePoint p;
        p.generation = g;
        for (const auto& run : mode.runs) {
            const auto& s = run.result.stats[g];
            p.meanMaxFitness += s.maxFitness;
            p.meanDiversity += s.diversity;
            p.meanMutationProb += s.mutationProb;
            p.meanCrossoverRate += s.crossoverRate;
        }
        p.meanMaxFitness /= count;
        p.meanDiversity /= count;
        p.meanMutationProb /= count;
        p.meanCrossoverRate /= count;
        mode.curve.push_back(p);
    }
}

json build_manifest(const ExperimentSpec& spec, const FuzzyConfig& fuzzy, const std::string& hash,
                    const std::optional<double>& target)
{
    json modes = json::array();
    for (auto m : spec.modes) {
        modes.push_back(std::string(1, mode_letter(m)));
    }
    json seeds = json::array();
    for (std::size_t r = 0; r < spec.runs; ++r) {
        seeds.push_back(spec.base.seed + r);
    }
    return {{"format", "fuzzyplan-manifest/1"},
            {"product", fs::absolute(spec.product).lexically_normal().string()},
            {"product_fnv1a64", hash},
            {"modes", std::move(modes)},
            {"runs", spec.runs},
            {"seed", spec.base.seed},
            {"seeds", std::move(seeds)},
            {"config", config_to_json(spec.base)},
            {"target", target ? json(*target) : json(nullptr)},
            {"fuzzy", fuzzy_config_to_json(fuzzy)}};
}

} // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec)
{
    validate(spec);
    const auto model = load_product_file(spec.product);
    const auto hash = file_fingerprint(spec.product);
    if (spec.expectedProductHash && *spec.expectedProductHash != hash) {
        throw ValidationError("product " + spec.product.string() + " changed since the manifest was written (hash "
                              + hash + ", expected " + *spec.expectedProductHash + ")");
    }
    const FuzzyConfig fuzzy = spec.fuzzy.value_or(FuzzyConfig{});

    ExperimentReport report;
    report.productName = model.name();
    report.productHash = hash;
    report.target = resolve_target(spec, model);
    report.manifest = build_manifest(spec, fuzzy, hash, report.target);

    const std::size_t jobs = spec.modes.size() * spec.runs;
    std::vector<std::optional<RunResult>> results(jobs);
    std::atomic<std::size_t> nextJob{0};
    std::atomic<bool> failed{false};
    std::exception_ptr firstError;
    std::mutex errorMutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t job = nextJob.fetch_add(1);
            if (job >= jobs || failed.load()) {
                return;
            }
            GAConfig cfg = spec.base;
            cfg.mode = spec.modes[job / spec.runs];
            cfg.seed = spec.base.seed + job % spec.runs;
            cfg.target = report.target;
            cfg.workers = 1;
            try {
                results[job] = evolve(model, cfg, fuzzy);
            } catch (...) {
                std::lock_guard lock(errorMutex);
                if (!firstError) {
                    firstError = std::current_exception();
                }
                failed = true;
            }
        }
    };
    {
        const std::size_t threads = std::min(spec.workers, jobs);
        if (threads <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < threads; ++t) {
                pool.emplace_back(worker);
            }
        }
    }

    for (std::size_t mi = 0; mi < spec.modes.size(); ++mi) {
        ModeReport mode;
        mode.mode = spec.modes[mi];
        for (std::size_t r = 0; r < spec.runs; ++r) {
            auto& res = results[mi * spec.runs + r];
            if (res) {
                mode.runs.push_back({spec.base.seed + r, std::move(*res)});
            }
        }
        aggregate(mode);
        report.modes.push_back(std::move(mode));
    }
    report.aborted = static_cast<bool>(firstError);

    if (!spec.outputDir.empty()) {
        write_outputs(report, model, spec.outputDir);
    }
    if (firstError) {
        std::rethrow_exception(firstError);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Output

namespace {

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

std::string mode_suffix(FitnessMode m)
{
    return std::string(1, mode_letter(m));
}

json metrics_json(const PlanMetrics& m)
{
    return {{"feasible_length", m.feasible},
            {"orientation_changes", m.orientationChanges},
            {"gripper_changes", m.gripperChanges},
            {"components", m.components}};
}

} // namespace

void emit_curves(const ExperimentReport& report, const fs::path& dir)
{
    ensure_dir(dir);
    for (const auto& mode : report.modes) {
        std::string csv = "generation,meanMaxFitness,meanDiversity,meanMutationProb,meanCrossoverRate\n";
        for (const auto& p : mode.curve) {
            csv += std::to_string(p.generation) + "," + format_number(p.meanMaxFitness) + ","
                + format_number(p.meanDiversity) + "," + format_number(p.meanMutationProb) + ","
                + format_number(p.meanCrossoverRate) + "\n";
        }
        write_text(dir / ("curves_" + mode_suffix(mode.mode) + ".csv"), csv);
    }
}

json report_to_json(const ExperimentReport& report, const ProductModel& model)
{
    json modes = json::array();
    for (const auto& mode : report.modes) {
        json runs = json::array();
        for (const auto& run : mode.runs) {
            const auto& res = run.result;
            std::optional<std::size_t> switched;
            for (const auto& s : res.stats) {
                if (s.populationAllFeasible) {
                    switched = s.generation;
                    break;
                }
            }
            runs.push_back({{"seed", run.seed},
                            {"best_fitness", res.bestFitness},
                            {"reference_fitness", res.referenceFitness},
                            {"success", res.success},
                            {"metrics", metrics_json(res.bestMetrics)},
                            {"phase_switch_generation", switched ? json(*switched) : json(nullptr)}});
        }
        json entry = {{"mode", mode_suffix(mode.mode)},
                      {"runs", std::move(runs)},
                      {"successes", mode.successes},
                      {"success_rate", mode.successRate},
                      {"final_mean_max_fitness", mode.curve.empty() ? json(nullptr) : json(mode.curve.back().meanMaxFitness)}};
        if (!mode.runs.empty()) {
            const auto& best = mode.runs[mode.bestRun];
            entry["best_plan"] = plan_to_json(model, best.result.best, best.result.bestMetrics);
            entry["best_plan"]["seed"] = best.seed;
            entry["best_plan"]["reference_fitness"] = best.result.referenceFitness;
        }
        modes.push_back(std::move(entry));
    }
    return {{"product", report.productName},
            {"product_fnv1a64", report.productHash},
            {"target", report.target ? json(*report.target) : json(nullptr)},
            {"aborted", report.aborted},
            {"modes", std::move(modes)}};
}

void write_outputs(const ExperimentReport& report, const ProductModel& model, const fs::path& dir)
{
    ensure_dir(dir);
    emit_curves(report, dir);
    for (const auto& mode : report.modes) {
        std::string csv = "seed,generation,maxFitness,meanFitness,phase,feasibleCount,diversity,mutationProb,crossoverRate\n";
        for (const auto& run : mode.runs) {
            for (const auto& s : run.result.stats) {
                csv += std::to_string(run.seed) + "," + std::to_string(s.generation) + "," + format_number(s.maxFitness)
                    + "," + format_number(s.meanFitness) + "," + (s.populationAllFeasible ? "2" : "1") + ","
                    + std::to_string(s.feasibleCount) + "," + format_number(s.diversity) + ","
                    + format_number(s.mutationProb) + "," + format_number(s.crossoverRate) + "\n";
            }
        }
        write_text(dir / ("runs_" + mode_suffix(mode.mode) + ".csv"), csv);
        if (!mode.runs.empty()) {
            const auto& best = mode.runs[mode.bestRun];
            auto plan = plan_to_json(model, best.result.best, best.result.bestMetrics);
            plan["mode"] = mode_suffix(mode.mode);
            plan["seed"] = best.seed;
            plan["fitness"] = best.result.bestFitness;
            plan["reference_fitness"] = best.result.referenceFitness;
            write_text(dir / ("best_plan_" + mode_suffix(mode.mode) + ".json"), plan.dump(2) + "\n");
        }
    }
    write_text(dir / "report.json", report_to_json(report, model).dump(2) + "\n");
    write_text(dir / "manifest.json", report.manifest.dump(2) + "\n");
}

} // namespace fuzzyplan
