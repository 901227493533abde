// fuzzyplan: assembly/disassembly sequence planning with fuzzy-hybrid GAs.
//
// Exit codes: 0 success, 2 parse/validation error, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fuzzyplan/errors.hpp"
#include "fuzzyplan/experiment.hpp"
#include "fuzzyplan/kernels.hpp"
#include "fuzzyplan/oracle.hpp"

namespace fs = std::filesystem;
using namespace fuzzyplan;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

void print_summary(const ExperimentReport& report, std::ostream& out)
{
    for (const auto& mode : report.modes) {
        out << "mode " << mode_letter(mode.mode) << ": success " << mode.successes << "/" << mode.runs.size();
        if (!mode.curve.empty()) {
            out << ", final mean max fitness " << format_number(mode.curve.back().meanMaxFitness);
        }
        if (!mode.runs.empty()) {
            out << ", best reference fitness " << format_number(mode.runs[mode.bestRun].result.referenceFitness);
        }
        out << "\n";
    }
    if (report.target) {
        out << "target fitness " << format_number(*report.target) << "\n";
    }
}

int run_plan(const std::string& product, const std::string& mode, const GAConfig& cfg,
             const std::optional<double>& target, const std::string& fuzzyPath, const std::string& outDir,
             std::size_t workers)
{
    ExperimentSpec spec;
    spec.product = product;
    auto parsed = parse_mode(mode);
    if (!parsed) {
        throw ValidationError("unknown mode \"" + mode + "\" (expected A, B, C or D)");
    }
    spec.modes = {*parsed};
    spec.runs = 1;
    spec.base = cfg;
    spec.base.workers = workers;
    spec.target = target;
    if (!fuzzyPath.empty()) {
        spec.fuzzy = load_fuzzy_config(fuzzyPath);
    }
    spec.outputDir = outDir;

    const auto report = run_experiment(spec);
    const auto model = load_product_file(spec.product);
    const auto& run = report.modes.front().runs.front();
    auto plan = plan_to_json(model, run.result.best, run.result.bestMetrics);
    plan["mode"] = std::string(1, mode_letter(*parsed));
    plan["seed"] = run.seed;
    plan["fitness"] = run.result.bestFitness;
    plan["reference_fitness"] = run.result.referenceFitness;
    plan["success"] = run.result.success;
    std::cout << plan.dump(2) << "\n";
    return 0;
}

int run_experiment_cmd(const std::string& specPath, const std::string& outDir, std::size_t workers)
{
    auto spec = load_experiment_spec(specPath);
    if (!outDir.empty()) {
        spec.outputDir = outDir;
    }
    spec.workers = workers;
    const auto report = run_experiment(spec);
    print_summary(report, std::cout);
    return 0;
}

int run_oracle(const std::string& product, std::size_t cap, const Weights& w, std::size_t reportCap)
{
    const auto model = load_product_file(product);
    OracleOptions opt;
    opt.cap = cap;
    opt.reportCap = reportCap;
    const auto result = brute_force_optimal(model, w, opt);
    nlohmann::json plans = nlohmann::json::array();
    for (const auto& p : result.optimalPlans) {
        plans.push_back(plan_to_json(model, p, metrics(model, p)));
    }
    nlohmann::json out = {{"product", model.name()},
                          {"weights", {w.feasible, w.orientation, w.gripper}},
                          {"optimal_fitness", result.optimalFitness},
                          {"optimal_count", result.optimalCount},
                          {"states_explored", result.statesExplored},
                          {"optimal_plans", std::move(plans)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int run_validate(const std::string& product)
{
    const auto model = load_product_file(product);
    std::cout << "ok: " << (model.name().empty() ? product : model.name()) << ", " << model.size() << " components, "
              << model.direction_count() << " directions, " << model.gripper_catalog().size() << " grippers\n";
    return 0;
}

Weights weights_from(const std::vector<double>& w)
{
    if (w.size() != 3) {
        throw ValidationError("--weights expects three comma-separated numbers");
    }
    Weights out{w[0], w[1], w[2]};
    validate(out);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Assembly/disassembly sequence planning with fuzzy-hybrid genetic algorithms"};
    app.require_subcommand(1);
    std::string isa;
    app.add_option("--isa", isa, "Kernel variant: scalar, avx2 or neon (default: best available)");

    GAConfig cfg;
    std::string product;
    std::string mode = "A";
    std::vector<double> weights = {2.0, 1.0, 1.0};
    std::string outDir;
    std::string fuzzyPath;
    std::optional<double> target;
    std::size_t workers = 1;

    auto* plan = app.add_subcommand("plan", "Run the GA once on a product and print the best plan");
    plan->add_option("product", product, "Product JSON file")->required();
    plan->add_option("--mode", mode, "A: algebraic, B: fuzzy ranking, C: adaptive, D: adaptive + fuzzy control")
        ->capture_default_str();
    plan->add_option("--pop", cfg.populationSize, "Population size")->capture_default_str();
    plan->add_option("--mut", cfg.mutationProb, "Mutation probability per individual")->capture_default_str();
    plan->add_option("--cross", cfg.crossoverRate, "Crossover rate")->capture_default_str();
    plan->add_option("--gens", cfg.maxGenerations, "Generations")->capture_default_str();
    plan->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    plan->add_option("--weights", weights, "w1,w2,w3")->delimiter(',')->expected(3);
    plan->add_option("--target", target, "Success threshold on the algebraic fitness");
    plan->add_option("--fuzzy-config", fuzzyPath, "Fuzzy systems JSON (defaults built in)");
    plan->add_option("--out", outDir, "Directory for CSV/JSON outputs");
    plan->add_option("--workers", workers, "Evaluation threads")->capture_default_str();

    std::string specPath;
    std::size_t runWorkers = 1;
    auto* experiment = app.add_subcommand("experiment", "Run repeated seeded runs per mode from a spec or manifest");
    experiment->add_option("spec", specPath, "Experiment or manifest JSON")->required();
    experiment->add_option("--out", outDir, "Output directory (overrides the spec)");
    experiment->add_option("--workers", runWorkers, "Concurrent runs")->capture_default_str();

    std::size_t cap = 7;
    std::size_t reportCap = 16;
    auto* oracle = app.add_subcommand("oracle", "Exhaustively find the optimal plans of a small product");
    oracle->add_option("product", product, "Product JSON file")->required();
    oracle->add_option("--cap", cap, "Largest component count to search")->capture_default_str();
    oracle->add_option("--weights", weights, "w1,w2,w3")->delimiter(',')->expected(3);
    oracle->add_option("--plans", reportCap, "Optimal plans to print")->capture_default_str();

    auto* validateCmd = app.add_subcommand("validate", "Check a product file");
    validateCmd->add_option("product", product, "Product JSON file")->required();

    std::string configOut;
    auto* fuzzyCmd = app.add_subcommand("fuzzy-config", "Print the default fuzzy systems as editable JSON");
    fuzzyCmd->add_option("--out", configOut, "Write to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!isa.empty()) {
            auto chosen = kernels::parse_isa(isa);
            if (!chosen || !kernels::available(*chosen)) {
                throw ValidationError("kernel variant \"" + isa + "\" is not available on this machine");
            }
            kernels::set_isa(chosen);
        }
        if (*plan) {
            cfg.weights = weights_from(weights);
            return run_plan(product, mode, cfg, target, fuzzyPath, outDir, workers);
        }
        if (*experiment) {
            return run_experiment_cmd(specPath, outDir, runWorkers);
        }
        if (*oracle) {
            return run_oracle(product, cap, weights_from(weights), reportCap);
        }
        if (*validateCmd) {
            return run_validate(product);
        }
        if (*fuzzyCmd) {
            const auto text = fuzzy_config_to_json(FuzzyConfig{}).dump(2) + "\n";
            if (configOut.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(configOut, std::ios::binary);
                if (!(out << text)) {
                    throw IoError("cannot write " + configOut);
                }
            }
            return 0;
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
