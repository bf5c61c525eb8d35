#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "storm/common.hpp"
#include "storm/explain.hpp"
#include "storm/ids.hpp"

namespace storm::guard {

enum class Mode { GaussianRange, KdeDensity };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

struct GuardConfig {
    double lambda = 2.0;                // acceptance band half-width in sigmas
    double sigma_floor = 1e-6;
    Mode mode = Mode::GaussianRange;
    double kde_density_quantile = 0.05; // KdeDensity mode
};

// Per-feature Gaussian kernel density over training attributions.
struct KdeEstimate {
    std::vector<double> samples;
    double bandwidth = 0.0;
    double density_floor = 0.0;  // quantile of training-point densities
};

// "Normal explanation behavior": per-feature mean/sd of the attributions
// the chosen explainer produced on normal training rows.
struct ShapProfile {
    std::vector<double> mu;
    std::vector<double> sigma;  // population sd, floored at sigma_floor
    int n_fit = 0;
    explain::Method explainer_method = explain::Method::ShapExact;
    std::vector<KdeEstimate> kde;  // empty unless fit in KdeDensity mode
};

struct GuardVerdict {
    Decision decision = Decision::Normal;
    std::vector<int> violating_features;  // 0-based indices
    std::vector<double> margins;          // |S_j - mu_j| / sigma_j
};

// Fits the profile on >= 30 normal scaled rows by explaining each row's
// anomaly score. KDE estimates are added when cfg.mode is KdeDensity.
ShapProfile fit_profile(const std::vector<std::vector<double>>& scaled_rows,
                        const ids::IdsModel& ids, const explain::ExplainerSettings& explainer,
                        const explain::BackgroundSet& bg, const GuardConfig& cfg);

// GaussianRange: feature j violates iff S_j leaves [mu_j - lambda sigma_j,
// mu_j + lambda sigma_j]; the bounds themselves are accepted. KdeDensity:
// violates iff the density at S_j falls below the fitted floor. Any
// violation flags the input as Attack.
GuardVerdict check(const ShapProfile& profile, const explain::Explanation& explanation,
                   const GuardConfig& cfg);

// Zero-touch label flip: a guard Attack overrides the detector verdict;
// the guard never downgrades a detector Attack.
Decision mitigate(const ids::IdsVerdict& ids_verdict, const GuardVerdict& guard_verdict);

// Gaussian-kernel density estimate for feature j at the given value.
double kde_density(const ShapProfile& profile, int feature, double value);

// h = 0.9 * min(sd, IQR/1.34) * n^(-1/5), floored.
double silverman_bandwidth(const std::vector<double>& values, double floor);

nlohmann::json profile_to_json(const ShapProfile& profile);
ShapProfile profile_from_json(const nlohmann::json& j);

void write_verdicts_csv(const std::filesystem::path& path,
                        const std::vector<GuardVerdict>& verdicts);

}  // namespace storm::guard
