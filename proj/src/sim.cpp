#include "storm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "storm/io.hpp"
#include "storm/rng.hpp"

namespace storm::sim {

namespace {

// RRC Setup Complete follows Setup after this handshake delay; the reserved
// resource is released early at that point.
constexpr double kHandshakeDelayS = 0.05;

// The gNB's message budget refills continuously; this is the burst horizon
// it can absorb above the sustained rate.
constexpr double kGnbBurstWindowS = 0.1;

constexpr int kAttackerUeId = -1;

struct Reservation {
    double grant_time = 0.0;
    int ue_id = 0;
    bool malicious = false;
    bool released = false;
};

enum class PendingKind { Arrival, Msg5, Timeout };

struct Pending {
    double time;
    std::uint64_t seq;
    PendingKind kind;
    int ue_id;
    bool malicious;
    std::size_t reservation;

    bool operator>(const Pending& o) const {
        if (time != o.time) return time > o.time;
        return seq > o.seq;
    }
};

struct TokenBucket {
    double rate;
    double burst;
    double tokens;
    double last_t = 0.0;

    bool take(double t) {
        tokens = std::min(burst, tokens + (t - last_t) * rate);
        last_t = t;
        if (tokens >= 1.0) {
            tokens -= 1.0;
            return true;
        }
        return false;
    }
};

void validate(const SimConfig& c) {
    if (c.duration_s <= 0.0) throw RejectedInput("duration must be positive");
    if (c.window_ms <= 0 || 1000 % c.window_ms != 0)
        throw RejectedInput("window_ms must divide 1000");
    if (c.n_resources < 1) throw RejectedInput("need at least one resource");
    if (c.reservation_hold_s <= 0.0) throw RejectedInput("reservation hold must be positive");
    if (c.benign_ue_count < 0 || c.benign_request_rate_hz < 0.0 || c.attack_rate_hz < 0.0)
        throw RejectedInput("rates and counts must be nonnegative");
    if (c.benign_load_modulation < 0.0 || c.benign_load_modulation >= 1.0)
        throw RejectedInput("load modulation must lie in [0, 1)");
    if (c.benign_load_period_s <= 0.0) throw RejectedInput("load period must be positive");
    if (c.overload_threshold_hz <= 0.0) throw RejectedInput("overload threshold must be positive");
    if (!std::isfinite(c.benign_request_rate_hz) || !std::isfinite(c.attack_rate_hz))
        throw RejectedInput("rates must be finite");
}

Label profile_label(const SimConfig& c) {
    if (c.attacker_present) return Label::Attack;
    const double offered = c.benign_ue_count * c.benign_request_rate_hz;
    return offered > c.overload_threshold_hz ? Label::HighLoad : Label::Normal;
}

}  // namespace

const char* to_string(Label label) {
    switch (label) {
        case Label::Normal: return "Normal";
        case Label::HighLoad: return "HighLoad";
        case Label::Attack: return "Attack";
    }
    return "Normal";
}

Label label_from_string(const std::string& name) {
    if (name == "Normal") return Label::Normal;
    if (name == "HighLoad") return Label::HighLoad;
    if (name == "Attack") return Label::Attack;
    throw RejectedInput("unknown label: " + name);
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::ConnRequest: return "ConnRequest";
        case EventKind::Setup: return "Setup";
        case EventKind::SetupComplete: return "SetupComplete";
        case EventKind::ResourceReserved: return "ResourceReserved";
        case EventKind::ResourceReleased: return "ResourceReleased";
        case EventKind::Blocked: return "Blocked";
    }
    return "ConnRequest";
}

std::vector<RrcEvent> simulate(const SimConfig& config) {
    validate(config);
    RngStream rng(derive_seed(config.seed, "sim.arrivals"));

    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue;
    std::uint64_t seq = 0;
    auto push = [&](double t, PendingKind kind, int ue, bool mal, std::size_t resv = 0) {
        if (t < config.duration_s) queue.push({t, seq++, kind, ue, mal, resv});
    };

    // Poisson arrivals; a shared sinusoidal load factor is applied by
    // thinning against the peak rate.
    const double peak_rate =
        config.benign_request_rate_hz * (1.0 + config.benign_load_modulation);
    auto next_benign_arrival = [&](double from) {
        double t = from;
        while (true) {
            t += rng.exponential(peak_rate);
            if (config.benign_load_modulation == 0.0) return t;
            const double factor =
                1.0 + config.benign_load_modulation *
                          std::sin(2.0 * std::numbers::pi * t / config.benign_load_period_s);
            if (rng.uniform01() * (1.0 + config.benign_load_modulation) <= factor) return t;
        }
    };

    for (int ue = 0; ue < config.benign_ue_count; ++ue)
        if (config.benign_request_rate_hz > 0.0)
            push(next_benign_arrival(0.0), PendingKind::Arrival, ue, false);
    if (config.attacker_present && config.attack_rate_hz > 0.0)
        push(1.0 / config.attack_rate_hz, PendingKind::Arrival, kAttackerUeId, true);

    TokenBucket gnb{config.overload_threshold_hz,
                    config.overload_threshold_hz * kGnbBurstWindowS,
                    config.overload_threshold_hz * kGnbBurstWindowS};

    std::vector<Reservation> reservations;
    int free_resources = config.n_resources;
    std::vector<RrcEvent> trace;

    while (!queue.empty()) {
        const Pending ev = queue.top();
        queue.pop();
        switch (ev.kind) {
            case PendingKind::Arrival: {
                // schedule this source's next request first
                if (ev.malicious) {
                    push(ev.time + 1.0 / config.attack_rate_hz, PendingKind::Arrival, ev.ue_id, true);
                } else {
                    push(next_benign_arrival(ev.time), PendingKind::Arrival, ev.ue_id, false);
                }
                trace.push_back({ev.time, EventKind::ConnRequest, ev.ue_id, ev.malicious});
                if (!gnb.take(ev.time) || free_resources == 0) {
                    trace.push_back({ev.time, EventKind::Blocked, ev.ue_id, ev.malicious});
                    break;
                }
                --free_resources;
                reservations.push_back({ev.time, ev.ue_id, ev.malicious, false});
                const std::size_t resv = reservations.size() - 1;
                trace.push_back({ev.time, EventKind::ResourceReserved, ev.ue_id, ev.malicious});
                trace.push_back({ev.time, EventKind::Setup, ev.ue_id, ev.malicious});
                if (ev.malicious) {
                    // never answers Msg4; resource sits until the hold expires
                    push(ev.time + config.reservation_hold_s, PendingKind::Timeout, ev.ue_id, true,
                         resv);
                } else {
                    push(ev.time + kHandshakeDelayS, PendingKind::Msg5, ev.ue_id, false, resv);
                }
                break;
            }
            case PendingKind::Msg5: {
                Reservation& resv = reservations[ev.reservation];
                if (gnb.take(ev.time)) {
                    trace.push_back({ev.time, EventKind::SetupComplete, ev.ue_id, false});
                    if (!resv.released) {
                        resv.released = true;
                        ++free_resources;
                        trace.push_back({ev.time, EventKind::ResourceReleased, ev.ue_id, false});
                    }
                } else {
                    // Msg5 dropped by the overloaded gNB: incomplete handshake,
                    // the resource is held for the full reservation time.
                    push(std::max(ev.time, resv.grant_time + config.reservation_hold_s),
                         PendingKind::Timeout, ev.ue_id, false, ev.reservation);
                }
                break;
            }
            case PendingKind::Timeout: {
                Reservation& resv = reservations[ev.reservation];
                if (!resv.released) {
                    resv.released = true;
                    ++free_resources;
                    trace.push_back({ev.time, EventKind::ResourceReleased, ev.ue_id, ev.malicious});
                }
                break;
            }
        }
    }
    return trace;
}

std::vector<WindowFeatures> extract_features(const std::vector<RrcEvent>& trace,
                                             const SimConfig& config) {
    validate(config);
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i].time_s < trace[i - 1].time_s) throw RejectedInput("trace is not time-ordered");

    const double window_s = config.window_ms / 1000.0;
    const int n_windows = static_cast<int>(std::floor(config.duration_s / window_s + 1e-9));
    const Label label = profile_label(config);

    std::vector<WindowFeatures> windows(static_cast<std::size_t>(n_windows));
    std::size_t idx = 0;
    int reserved = 0;
    double total = static_cast<double>(config.n_resources);
    for (int w = 0; w < n_windows; ++w) {
        const double start = w * window_s;
        const double end = start + window_s;
        long requests = 0, msg4 = 0, msg5 = 0, blocked = 0;
        double occupancy_integral = 0.0;
        double cursor = start;
        while (idx < trace.size() && trace[idx].time_s < end) {
            const RrcEvent& ev = trace[idx];
            switch (ev.kind) {
                case EventKind::ConnRequest: ++requests; break;
                case EventKind::Setup: ++msg4; break;
                case EventKind::SetupComplete: ++msg5; break;
                case EventKind::Blocked: ++blocked; break;
                case EventKind::ResourceReserved:
                    occupancy_integral += (ev.time_s - cursor) * reserved;
                    cursor = ev.time_s;
                    ++reserved;
                    break;
                case EventKind::ResourceReleased:
                    occupancy_integral += (ev.time_s - cursor) * reserved;
                    cursor = ev.time_s;
                    --reserved;
                    break;
            }
            ++idx;
        }
        occupancy_integral += (end - cursor) * reserved;

        WindowFeatures& f = windows[static_cast<std::size_t>(w)];
        f.window_start_s = start;
        f.f1_conn_request_rate = requests / window_s;
        f.f2_msg4_count = static_cast<double>(msg4);
        f.f3_msg5_count = static_cast<double>(msg5);
        if (msg4 > 0) {
            f.f4_r1_ratio = std::min(1.0, static_cast<double>(msg5) / msg4);
        } else if (msg5 > 0) {
            // completions spilling over from an earlier window: healthy
            f.f4_r1_ratio = 1.0;
        } else if (requests + blocked > 0) {
            // signaling without any handshake progress
            f.f4_r1_ratio = 0.0;
        } else {
            f.f4_r1_ratio = 1.0;  // idle convention
        }
        f.f5_resource_occupancy = std::clamp(occupancy_integral / (window_s * total), 0.0, 1.0);
        f.label = label;
    }
    return windows;
}

LabeledDataset generate_dataset(const std::vector<SimConfig>& profiles, int windows_per_profile) {
    if (profiles.empty()) throw RejectedInput("no simulation profiles");
    if (windows_per_profile < 1) throw RejectedInput("windows_per_profile must be positive");

    LabeledDataset dataset;
    std::uint64_t shuffle_seed = 0;
    std::ostringstream digest;
    for (const auto& profile : profiles) {
        shuffle_seed = splitmix64(shuffle_seed ^ derive_seed(profile.seed, "dataset.shuffle"));
        if (!digest.str().empty()) digest << "+";
        digest << config_digest(profile);
        auto windows = extract_features(simulate(profile), profile);
        const std::size_t keep =
            std::min(windows.size(), static_cast<std::size_t>(windows_per_profile));
        dataset.rows.insert(dataset.rows.end(), windows.begin(), windows.begin() + keep);
    }
    dataset.provenance = digest.str();

    RngStream rng(shuffle_seed);
    for (std::size_t i = dataset.rows.size(); i > 1; --i)
        std::swap(dataset.rows[i - 1], dataset.rows[rng.index(i)]);

    dataset.feat_min.assign(kFeatureCount, 1e300);
    dataset.feat_max.assign(kFeatureCount, -1e300);
    bool any_normal = false;
    for (const auto& row : dataset.rows) {
        if (row.label != Label::Normal) continue;
        any_normal = true;
        const auto v = row.features();
        for (int j = 0; j < kFeatureCount; ++j) {
            dataset.feat_min[j] = std::min(dataset.feat_min[j], v[j]);
            dataset.feat_max[j] = std::max(dataset.feat_max[j], v[j]);
        }
    }
    if (!any_normal)
        throw CalibrationImpossible("no Normal rows available to fit the feature scaler");
    return dataset;
}

std::string config_digest(const SimConfig& c) {
    std::ostringstream s;
    s << c.duration_s << "|" << c.window_ms << "|" << c.n_resources << "|" << c.reservation_hold_s
      << "|" << c.benign_ue_count << "|" << c.benign_request_rate_hz << "|"
      << c.benign_load_modulation << "|" << c.benign_load_period_s << "|" << c.attacker_present
      << "|" << c.attack_rate_hz << "|" << c.overload_threshold_hz << "|" << c.seed;
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(s.str())));
    return buf;
}

void write_dataset_csv(const std::filesystem::path& csv_path, const LabeledDataset& dataset) {
    std::string out =
        "window_start_s,f1_conn_request_rate,f2_msg4_count,f3_msg5_count,f4_r1_ratio,"
        "f5_resource_occupancy,label\n";
    for (const auto& row : dataset.rows) {
        out += io::join_csv({io::format_double(row.window_start_s),
                             io::format_double(row.f1_conn_request_rate),
                             io::format_double(row.f2_msg4_count),
                             io::format_double(row.f3_msg5_count),
                             io::format_double(row.f4_r1_ratio),
                             io::format_double(row.f5_resource_occupancy),
                             to_string(row.label)});
    }
    io::write_text_file(csv_path, out);

    nlohmann::json sidecar;
    sidecar["provenance"] = dataset.provenance;
    if (!dataset.feat_min.empty())
        sidecar["scaler"] = {{"min", dataset.feat_min}, {"max", dataset.feat_max}};
    std::filesystem::path meta = csv_path;
    meta.replace_extension(".meta.json");
    io::write_text_file(meta, sidecar.dump(2) + "\n");
}

LabeledDataset read_dataset_csv(const std::filesystem::path& csv_path) {
    LabeledDataset dataset;
    std::istringstream in(io::read_text_file(csv_path));
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto fields = io::split_csv_line(line);
        if (fields.size() != 7) throw RejectedInput("dataset row must have 7 fields");
        WindowFeatures row;
        row.window_start_s = io::parse_double(fields[0]);
        row.f1_conn_request_rate = io::parse_double(fields[1]);
        row.f2_msg4_count = io::parse_double(fields[2]);
        row.f3_msg5_count = io::parse_double(fields[3]);
        row.f4_r1_ratio = io::parse_double(fields[4]);
        row.f5_resource_occupancy = io::parse_double(fields[5]);
        row.label = label_from_string(fields[6]);
        dataset.rows.push_back(row);
    }

    std::filesystem::path meta = csv_path;
    meta.replace_extension(".meta.json");
    if (std::filesystem::exists(meta)) {
        const auto sidecar = nlohmann::json::parse(io::read_text_file(meta));
        dataset.provenance = sidecar.value("provenance", "");
        if (sidecar.contains("scaler")) {
            dataset.feat_min = sidecar["scaler"]["min"].get<std::vector<double>>();
            dataset.feat_max = sidecar["scaler"]["max"].get<std::vector<double>>();
        }
    }
    return dataset;
}

}  // namespace storm::sim
