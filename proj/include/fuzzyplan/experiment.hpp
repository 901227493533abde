#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzyplan/fuzzy_engine.hpp"
#include "fuzzyplan/ga_core.hpp"

namespace fuzzyplan {

/// A batch of seeded runs over one product, one block of runs per mode.
/// Run r of every mode uses seed `base.seed + r`.
struct ExperimentSpec {
    std::filesystem::path product;
    std::vector<FitnessMode> modes;
    std::size_t runs = 20;
    GAConfig base;
    std::optional<double> target; // overrides the product's reference optimum / oracle
    std::optional<FuzzyConfig> fuzzy;
    std::optional<std::string> expectedProductHash; // checked when replaying a manifest
    std::filesystem::path outputDir;                // empty: nothing written
    std::size_t workers = 1;                        // concurrent runs; never affects outputs
};

void validate(const ExperimentSpec& spec);

/// Parses an experiment file (or a manifest written by a previous run).
/// Relative paths resolve against `baseDir`.
ExperimentSpec spec_from_json(const nlohmann::json& doc, const std::filesystem::path& baseDir);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct CurvePoint {
    std::size_t generation = 0;
    double meanMaxFitness = 0.0;
    double meanDiversity = 0.0;
    double meanMutationProb = 0.0;
    double meanCrossoverRate = 0.0;
};

struct RunRecord {
    std::uint64_t seed = 0;
    RunResult result;
};

struct ModeReport {
    FitnessMode mode = FitnessMode::AlgebraicFixed;
    std::vector<RunRecord> runs; // ordered by seed
    std::vector<CurvePoint> curve;
    std::size_t successes = 0;
    double successRate = 0.0;
    std::size_t bestRun = 0; // index into runs: highest algebraic fitness, lowest seed on ties
};

struct ExperimentReport {
    std::string productName;
    std::string productHash;
    std::optional<double> target;
    std::vector<ModeReport> modes;
    nlohmann::json manifest;
    bool aborted = false;
};

/// Runs every (mode, seed) pair on a pool of `spec.workers` threads,
/// aggregates curves and success rates, and writes outputs when
/// `spec.outputDir` is set. If a run throws, outputs for the completed
/// runs are still written (report marked aborted) before rethrowing.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Writes curves_<mode>.csv for every mode into `dir`.
void emit_curves(const ExperimentReport& report, const std::filesystem::path& dir);

/// Writes every output file: curves, per-run curves, best plans,
/// report.json and manifest.json.
void write_outputs(const ExperimentReport& report, const ProductModel& model, const std::filesystem::path& dir);

nlohmann::json report_to_json(const ExperimentReport& report, const ProductModel& model);

/// FNV-1a 64 of the file bytes as 16 hex digits.
std::string file_fingerprint(const std::filesystem::path& path);

/// Shortest round-trip decimal form of `v`.
std::string format_number(double v);

} // namespace fuzzyplan
