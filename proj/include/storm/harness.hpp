#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "storm/attacks.hpp"
#include "storm/explain.hpp"
#include "storm/guard.hpp"
#include "storm/ids.hpp"
#include "storm/metrics.hpp"
#include "storm/net.hpp"
#include "storm/sim.hpp"

namespace storm::harness {

struct ExperimentConfig {
    sim::SimConfig sim;  // base benign profile; scenarios derive the storm variant
    net::TrainConfig train;
    std::vector<attacks::AttackConfig> attack_grid;
    guard::GuardConfig guard;
    explain::ExplainerSettings explainer;
    std::optional<explain::Method> explainer_choice;  // nullopt = detector only
    std::string output_dir = "out";
    std::uint64_t master_seed = 42;

    // fixed-seed benchmark composition
    int train_windows = 400;
    int holdout_normal_windows = 200;
    int holdout_attack_windows = 200;
    int attack_warmup_windows = 30;  // storm onset dropped: holdout is steady state
    double scenario_attack_eps = 0.1;  // BIM budget for the guard scenarios
    int attack_steps = 20;
    double alpha_ratio = 0.1;          // step = epsilon * alpha_ratio
    std::size_t background_size = 100;
    double ids_z = 3.0;  // benchmark threshold z-score; holdout tails are
                         // heavier than Gaussian, z=2 flags too many normals
};

ExperimentConfig default_config();

// Flat key=value file with [section] headers; keys mirror the config fields.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Everything the three scenarios share: datasets, trained detector,
// scaled row caches and the explainer background.
struct Benchmark {
    sim::LabeledDataset train_set;
    sim::LabeledDataset holdout_normal;
    sim::LabeledDataset holdout_attack;
    ids::IdsModel model;
    std::vector<std::vector<double>> train_scaled;
    std::vector<std::vector<double>> holdout_normal_scaled;
    std::vector<std::vector<double>> holdout_attack_scaled;
    explain::BackgroundSet background;
};

Benchmark build_benchmark(const ExperimentConfig& cfg);
void write_benchmark_artifacts(const ExperimentConfig& cfg, const Benchmark& bench);

// Scenario 1: baseline accuracy plus degradation across the attack grid.
std::vector<MetricsReport> run_scenario_degradation(const ExperimentConfig& cfg,
                                                    const Benchmark& bench);
// Scenario 2: guard detection of manipulated inputs per explainer method,
// plus the detector-only baseline that flags nothing by construction.
std::vector<MetricsReport> run_scenario_detection(const ExperimentConfig& cfg,
                                                  const Benchmark& bench);
// Scenario 3: full pipeline with the zero-touch label flip.
std::vector<MetricsReport> run_scenario_mitigation(const ExperimentConfig& cfg,
                                                   const Benchmark& bench);

// Convenience overloads that build the benchmark first.
std::vector<MetricsReport> run_scenario_degradation(const ExperimentConfig& cfg);
std::vector<MetricsReport> run_scenario_detection(const ExperimentConfig& cfg);
std::vector<MetricsReport> run_scenario_mitigation(const ExperimentConfig& cfg);

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricsReport>& reports);
std::vector<MetricsReport> read_metrics_csv(const std::filesystem::path& path);

std::string format_report_table(const std::vector<MetricsReport>& reports);

}  // namespace storm::harness
