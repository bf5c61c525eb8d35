#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "storm/common.hpp"

namespace storm::explain {

enum class Method { ShapExact, ShapKernel, Lime, Permutation };

const char* to_string(Method method);
Method method_from_string(const std::string& name);

using ScoreFn = std::function<double(const std::vector<double>&)>;

// Reference rows standing in for "feature absent" when building coalitions.
struct BackgroundSet {
    std::vector<std::vector<double>> rows;

    static BackgroundSet subsample(const std::vector<std::vector<double>>& source,
                                   std::size_t max_size, std::uint64_t seed);

    std::vector<double> feature_means() const;
    double mean_score(const ScoreFn& f) const;
};

struct Explanation {
    std::vector<double> attributions;  // one S_j per feature
    double base_value = 0.0;           // mean score over the background
    Method method = Method::ShapExact;
    double target_score = 0.0;         // f(x) being explained
};

// Exact interventional Shapley values by coalition enumeration (2^m
// evaluations of the background-averaged value function). m must be <= 12;
// use shap_kernel beyond that.
Explanation shap_exact(const ScoreFn& f, const std::vector<double>& x, const BackgroundSet& bg);

// Kernel SHAP: weighted least squares over coalitions with the Shapley
// kernel, endpoints enforced as exact constraints. When n_samples covers
// all 2^m - 2 proper coalitions the solver enumerates them instead of
// sampling and reproduces shap_exact.
Explanation shap_kernel(const ScoreFn& f, const std::vector<double>& x, const BackgroundSet& bg,
                        int n_samples, std::uint64_t seed);

// Local linear surrogate: Gaussian perturbations around x, proximity-
// weighted ridge regression; attribution_j = coef_j * (x_j - bg_mean_j).
Explanation lime_local(const ScoreFn& f, const std::vector<double>& x, const BackgroundSet& bg,
                       double sigma_perturb, int n_samples, double ridge_gamma,
                       std::uint64_t seed);

// Signed per-instance occlusion: mean score change when feature j is
// replaced by a random background row's value.
Explanation permutation_importance(const ScoreFn& f, const std::vector<double>& x,
                                   const BackgroundSet& bg, int n_draws, std::uint64_t seed);

struct ExplainerSettings {
    Method method = Method::ShapExact;
    int kernel_samples = 64;
    double lime_sigma = 0.25;
    int lime_samples = 400;
    double lime_ridge = 1e-3;
    int perm_draws = 64;
    std::uint64_t seed = 0;
};

Explanation explain(const ScoreFn& f, const std::vector<double>& x, const BackgroundSet& bg,
                    const ExplainerSettings& settings);

void write_explanations_csv(const std::filesystem::path& path,
                            const std::vector<Explanation>& explanations);

}  // namespace storm::explain
