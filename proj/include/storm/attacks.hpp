#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "storm/ids.hpp"
#include "storm/sim.hpp"

namespace storm::attacks {

enum class AttackKind { FGSM, PGD, BIM, Gaussian, NoAttack };

const char* to_string(AttackKind kind);
AttackKind attack_kind_from_string(const std::string& name);

struct AttackConfig {
    AttackKind kind = AttackKind::NoAttack;
    double epsilon = 0.0;     // L-inf budget in scaled feature space
    double step_alpha = 0.0;  // iterative methods
    int steps = 1;            // iterative methods
    std::uint64_t seed = 0;   // PGD random start, Gaussian noise
    std::vector<double> clip_lo;  // empty = zeros
    std::vector<double> clip_hi;  // empty = ones
};

struct AdversarialBatch {
    std::vector<sim::WindowFeatures> originals;
    std::vector<std::vector<double>> originals_scaled;
    std::vector<std::vector<double>> perturbed;
    AttackConfig config;
};

// All methods perturb in scaled [0,1] feature space and move DOWN the
// anomaly-score gradient: evasion makes malicious traffic look normal.
// Empty clip vectors default to the unit box.

std::vector<double> fgsm(const ids::IdsModel& ids, const std::vector<double>& x_scaled, double eps,
                         const std::vector<double>& clip_lo = {},
                         const std::vector<double>& clip_hi = {});

std::vector<double> bim(const ids::IdsModel& ids, const std::vector<double>& x_scaled, double eps,
                        double alpha, int steps, const std::vector<double>& clip_lo = {},
                        const std::vector<double>& clip_hi = {});

std::vector<double> pgd(const ids::IdsModel& ids, const std::vector<double>& x_scaled, double eps,
                        double alpha, int steps, std::uint64_t seed,
                        const std::vector<double>& clip_lo = {},
                        const std::vector<double>& clip_hi = {});

std::vector<double> gaussian(const std::vector<double>& x_scaled, double eps, std::uint64_t seed,
                             const std::vector<double>& clip_lo = {},
                             const std::vector<double>& clip_hi = {});

// Applies the configured method to every row. Rows must all carry the
// Attack label (only malicious traffic gets disguised).
AdversarialBatch attack_batch(const ids::IdsModel& ids,
                              const std::vector<sim::WindowFeatures>& rows,
                              const AttackConfig& config);

void write_batch_csv(const std::filesystem::path& path, const AdversarialBatch& batch);

}  // namespace storm::attacks
