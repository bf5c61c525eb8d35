#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "storm/common.hpp"

namespace storm::sim {

enum class Label { Normal, HighLoad, Attack };

const char* to_string(Label label);
Label label_from_string(const std::string& name);

struct SimConfig {
    double duration_s = 20.0;
    int window_ms = 100;
    int n_resources = 16;
    double reservation_hold_s = 2.7;
    int benign_ue_count = 0;
    double benign_request_rate_hz = 0.0;  // per UE, mean rate
    // slow sinusoidal swing of the benign rate, shared by all UEs:
    // rate(t) = mean * (1 + modulation * sin(2 pi t / period))
    double benign_load_modulation = 0.0;  // in [0, 1)
    double benign_load_period_s = 20.0;
    bool attacker_present = false;
    double attack_rate_hz = 132.0;
    double overload_threshold_hz = 90.0;  // gNB message-processing capacity
    std::uint64_t seed = 0;
};

enum class EventKind {
    ConnRequest,       // Msg1/Msg3 collapsed
    Setup,             // Msg4
    SetupComplete,     // Msg5
    ResourceReserved,
    ResourceReleased,
    Blocked
};

const char* to_string(EventKind kind);

struct RrcEvent {
    double time_s = 0.0;
    EventKind kind = EventKind::ConnRequest;
    int ue_id = 0;  // -1 marks the attacker
    bool malicious = false;
};

struct WindowFeatures {
    double window_start_s = 0.0;
    double f1_conn_request_rate = 0.0;  // requests/s in window
    double f2_msg4_count = 0.0;
    double f3_msg5_count = 0.0;
    double f4_r1_ratio = 1.0;           // Msg5/Msg4, idle convention 1.0
    double f5_resource_occupancy = 0.0; // time-mean reserved fraction
    Label label = Label::Normal;

    std::vector<double> features() const {
        return {f1_conn_request_rate, f2_msg4_count, f3_msg5_count, f4_r1_ratio,
                f5_resource_occupancy};
    }
};

struct LabeledDataset {
    std::vector<WindowFeatures> rows;
    std::vector<double> feat_min;  // fit on Normal rows only
    std::vector<double> feat_max;
    std::string provenance;        // digest over the generating configs
};

// Discrete-event trace of the RRC connection procedure. Benign UEs arrive
// as independent Poisson sources and answer Msg4 with Msg5 after a fixed
// handshake delay; the attacker arrives at a constant rate and never
// answers. Requests and Msg5s both consume gNB processing capacity
// (overload_threshold_hz messages/s); messages beyond it are dropped.
std::vector<RrcEvent> simulate(const SimConfig& config);

// One WindowFeatures per window_ms slice. Throws RejectedInput on an
// unordered trace.
std::vector<WindowFeatures> extract_features(const std::vector<RrcEvent>& trace,
                                             const SimConfig& config);

// Runs every profile, keeps windows_per_profile windows each, shuffles
// (seeded from the profile seeds) and fits per-feature min/max on the
// Normal rows. Throws CalibrationImpossible when no Normal rows exist.
LabeledDataset generate_dataset(const std::vector<SimConfig>& profiles, int windows_per_profile);

std::string config_digest(const SimConfig& config);

void write_dataset_csv(const std::filesystem::path& csv_path, const LabeledDataset& dataset);
LabeledDataset read_dataset_csv(const std::filesystem::path& csv_path);

}  // namespace storm::sim
