#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "storm/common.hpp"
#include "storm/net.hpp"
#include "storm/sim.hpp"

namespace storm::ids {

// Min-max scaler fit on normal training rows. transform() clamps into
// [0, 1] so downstream perturbation budgets share one domain; constant
// features map to 0.5.
struct Scaler {
    std::vector<double> min;
    std::vector<double> max;

    static Scaler fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> transform(const std::vector<double>& raw) const;
};

struct IdsVerdict {
    double score_d = 0.0;
    Decision predicted = Decision::Normal;
};

// Deployed detector: autoencoder + scaler + z-score threshold
// tau = mu_d + z * sigma_d over the training scores.
struct IdsModel {
    net::MlpModel autoencoder;
    Scaler scaler;
    double threshold_tau = 0.0;
    double score_mean_mu_d = 0.0;
    double score_sd_sigma_d = 0.0;
    double zscore_z = 2.0;

    // Euclidean reconstruction distance of an already-scaled vector.
    double score_scaled(const std::vector<double>& x_scaled) const;
    double anomaly_score(const std::vector<double>& x_raw) const;

    IdsVerdict classify_scaled(const std::vector<double>& x_scaled) const;
    IdsVerdict classify(const std::vector<double>& x_raw) const;
};

// Trains the detector on normal windows only. Throws InsufficientData below
// 50 rows and RejectedInput if any row is not labeled Normal.
IdsModel train_ids(const std::vector<sim::WindowFeatures>& normal_rows,
                   const net::TrainConfig& net_config, double z);

nlohmann::json ids_to_json(const IdsModel& model);
IdsModel ids_from_json(const nlohmann::json& j);

}  // namespace storm::ids
