#include <algorithm>
#include <map>
#include <vector>

#include <doctest.h>

#include "storm/common.hpp"
#include "storm/sim.hpp"

using namespace storm;
using namespace storm::sim;

namespace {

SimConfig normal_profile(std::uint64_t seed, double duration = 20.0) {
    SimConfig c;
    c.duration_s = duration;
    c.benign_ue_count = 8;
    c.benign_request_rate_hz = 5.0;
    c.seed = seed;
    return c;
}

SimConfig highload_profile(std::uint64_t seed, double duration = 20.0) {
    SimConfig c = normal_profile(seed, duration);
    c.benign_ue_count = 24;  // offered 120 req/s > 90 threshold
    return c;
}

SimConfig attack_profile(std::uint64_t seed, double duration = 20.0) {
    SimConfig c = normal_profile(seed, duration);
    c.attacker_present = true;
    return c;
}

double mean_of(const std::vector<WindowFeatures>& rows, double WindowFeatures::* field) {
    double total = 0.0;
    for (const auto& row : rows) total += row.*field;
    return total / static_cast<double>(rows.size());
}

}  // namespace

TEST_CASE("empty system produces no signaling") {
    SimConfig c;
    c.duration_s = 5.0;
    const auto trace = simulate(c);
    CHECK(trace.empty());
}

TEST_CASE("simulation is deterministic under its seed") {
    const auto a = simulate(attack_profile(7, 5.0));
    const auto b = simulate(attack_profile(7, 5.0));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].time_s == b[i].time_s);
        CHECK(a[i].kind == b[i].kind);
        CHECK(a[i].ue_id == b[i].ue_id);
    }
    const auto c = simulate(attack_profile(8, 5.0));
    CHECK(a.size() != c.size());
}

TEST_CASE("storm exhausts the pool and blocks within the first second") {
    SimConfig c;
    c.duration_s = 5.0;
    c.attacker_present = true;
    const auto trace = simulate(c);
    double first_blocked = -1.0;
    for (const auto& ev : trace) {
        if (ev.kind == EventKind::Blocked) {
            first_blocked = ev.time_s;
            break;
        }
    }
    REQUIRE(first_blocked >= 0.0);
    CHECK(first_blocked < 1.0);
}

TEST_CASE("no blocking below the pool's sustained service capacity") {
    // 16 resources / 2.7 s hold is ~5.9 held requests per second
    SimConfig slow;
    slow.duration_s = 20.0;
    slow.attacker_present = true;
    slow.attack_rate_hz = 5.0;
    for (const auto& ev : simulate(slow)) CHECK(ev.kind != EventKind::Blocked);

    SimConfig calm = normal_profile(3, 20.0);
    calm.benign_ue_count = 4;  // offered 20 req/s, completions at 50 ms
    for (const auto& ev : simulate(calm)) CHECK(ev.kind != EventKind::Blocked);
}

TEST_CASE("causality and pool-cap invariants hold on a long storm trace") {
    const auto trace = simulate(attack_profile(21, 30.0));
    CHECK(trace.size() > 10000);
    std::map<int, long> msg4_seen, msg5_seen;
    long reserved = 0;
    double last_t = 0.0;
    for (const auto& ev : trace) {
        CHECK(ev.time_s >= last_t);
        last_t = ev.time_s;
        switch (ev.kind) {
            case EventKind::Setup: ++msg4_seen[ev.ue_id]; break;
            case EventKind::SetupComplete:
                ++msg5_seen[ev.ue_id];
                CHECK(msg5_seen[ev.ue_id] <= msg4_seen[ev.ue_id]);
                break;
            case EventKind::ResourceReserved:
                ++reserved;
                CHECK(reserved <= 16);
                break;
            case EventKind::ResourceReleased:
                --reserved;
                CHECK(reserved >= 0);
                break;
            default: break;
        }
    }
    // the attacker never completes a handshake
    CHECK(msg5_seen.count(-1) == 0);
    CHECK(msg4_seen[-1] > 0);
}

TEST_CASE("feature extraction applies the R1 conventions") {
    SimConfig c;
    c.duration_s = 0.3;

    std::vector<RrcEvent> trace;
    // window 0: 10 Msg4, 4 Msg5 -> f4 = 0.4
    for (int i = 0; i < 10; ++i) trace.push_back({0.001 * (i + 1), EventKind::Setup, i, false});
    for (int i = 0; i < 4; ++i) trace.push_back({0.05 + 0.001 * i, EventKind::SetupComplete, i, false});
    // window 1: requests but no progress -> f4 = 0
    trace.push_back({0.15, EventKind::ConnRequest, 1, false});
    trace.push_back({0.16, EventKind::Blocked, 1, false});
    // window 2: empty -> idle convention
    std::sort(trace.begin(), trace.end(),
              [](const RrcEvent& a, const RrcEvent& b) { return a.time_s < b.time_s; });

    const auto windows = extract_features(trace, c);
    REQUIRE(windows.size() == 3);
    CHECK(windows[0].f2_msg4_count == 10.0);
    CHECK(windows[0].f3_msg5_count == 4.0);
    CHECK(windows[0].f4_r1_ratio == doctest::Approx(0.4));
    CHECK(windows[1].f4_r1_ratio == 0.0);
    CHECK(windows[2].f1_conn_request_rate == 0.0);
    CHECK(windows[2].f2_msg4_count == 0.0);
    CHECK(windows[2].f3_msg5_count == 0.0);
    CHECK(windows[2].f4_r1_ratio == 1.0);
    CHECK(windows[2].label == Label::Normal);
}

TEST_CASE("occupancy carries across idle windows") {
    SimConfig c;
    c.duration_s = 0.3;
    std::vector<RrcEvent> trace{{0.05, EventKind::ResourceReserved, 0, false}};
    const auto windows = extract_features(trace, c);
    REQUIRE(windows.size() == 3);
    CHECK(windows[0].f5_resource_occupancy == doctest::Approx(0.5 / 16.0));
    CHECK(windows[1].f5_resource_occupancy == doctest::Approx(1.0 / 16.0));
    CHECK(windows[2].f5_resource_occupancy == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("holds shorter than the handshake delay still yield ordered traces") {
    SimConfig c;
    c.duration_s = 10.0;
    c.reservation_hold_s = 0.02;  // expires before Msg5 can arrive
    c.benign_ue_count = 20;
    c.benign_request_rate_hz = 6.0;  // bursts over the message budget drop Msg5s
    c.seed = 77;
    const auto trace = simulate(c);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i].time_s >= trace[i - 1].time_s);
    CHECK_NOTHROW(extract_features(trace, c));
}

TEST_CASE("unordered traces are rejected") {
    SimConfig c;
    c.duration_s = 0.2;
    std::vector<RrcEvent> trace{{0.15, EventKind::ConnRequest, 0, false},
                                {0.05, EventKind::ConnRequest, 1, false}};
    CHECK_THROWS_AS(extract_features(trace, c), RejectedInput);
}

TEST_CASE("class separation: request rate and R1 order as expected") {
    const auto normal = extract_features(simulate(normal_profile(101)), normal_profile(101));
    const auto high = extract_features(simulate(highload_profile(102)), highload_profile(102));
    const auto attack = extract_features(simulate(attack_profile(103)), attack_profile(103));
    REQUIRE(normal.size() >= 200);
    REQUIRE(high.size() >= 200);
    REQUIRE(attack.size() >= 200);

    CHECK(normal.front().label == Label::Normal);
    CHECK(high.front().label == Label::HighLoad);
    CHECK(attack.front().label == Label::Attack);

    const double f1_normal = mean_of(normal, &WindowFeatures::f1_conn_request_rate);
    const double f1_attack = mean_of(attack, &WindowFeatures::f1_conn_request_rate);
    CHECK(f1_attack > 90.0);
    CHECK(f1_normal < 90.0);

    const double r1_normal = mean_of(normal, &WindowFeatures::f4_r1_ratio);
    const double r1_high = mean_of(high, &WindowFeatures::f4_r1_ratio);
    const double r1_attack = mean_of(attack, &WindowFeatures::f4_r1_ratio);
    CHECK(r1_attack < r1_high);
    CHECK(r1_high < r1_normal);

    for (const auto* rows : {&normal, &high, &attack}) {
        for (const auto& w : *rows) {
            CHECK(w.f4_r1_ratio >= 0.0);
            CHECK(w.f4_r1_ratio <= 1.0);
            CHECK(w.f5_resource_occupancy >= 0.0);
            CHECK(w.f5_resource_occupancy <= 1.0);
            CHECK(w.f1_conn_request_rate >= 0.0);
            CHECK(w.f2_msg4_count >= 0.0);
            CHECK(w.f3_msg5_count >= 0.0);
        }
    }
}

TEST_CASE("attack windows depress R1 below the normal mean") {
    const auto normal = extract_features(simulate(normal_profile(55, 10.0)), normal_profile(55, 10.0));
    const auto attack = extract_features(simulate(attack_profile(56, 10.0)), attack_profile(56, 10.0));
    CHECK(mean_of(attack, &WindowFeatures::f4_r1_ratio) <
          mean_of(normal, &WindowFeatures::f4_r1_ratio));
}

TEST_CASE("dataset generation calibrates on normal rows and shuffles deterministically") {
    const auto a = generate_dataset({normal_profile(9, 10.0)}, 100);
    CHECK(a.rows.size() == 100);
    for (const auto& row : a.rows) CHECK(row.label == Label::Normal);
    for (int j = 0; j < kFeatureCount; ++j) CHECK(a.feat_min[j] <= a.feat_max[j]);

    const auto b = generate_dataset({normal_profile(9, 10.0)}, 100);
    REQUIRE(b.rows.size() == a.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        CHECK(a.rows[i].window_start_s == b.rows[i].window_start_s);

    const auto mixed = generate_dataset({normal_profile(9, 10.0), attack_profile(10, 10.0)}, 100);
    double f1_normal = 0.0, f1_attack = 0.0;
    long n_normal = 0, n_attack = 0;
    for (const auto& row : mixed.rows) {
        if (row.label == Label::Attack) {
            f1_attack += row.f1_conn_request_rate;
            ++n_attack;
        } else {
            f1_normal += row.f1_conn_request_rate;
            ++n_normal;
        }
    }
    CHECK(n_attack == 100);
    CHECK(f1_attack / n_attack > f1_normal / n_normal);

    CHECK_THROWS_AS(generate_dataset({attack_profile(3, 10.0)}, 50), CalibrationImpossible);
}

TEST_CASE("dataset csv round-trips") {
    const auto dataset = generate_dataset({normal_profile(12, 5.0)}, 50);
    const auto dir = std::filesystem::temp_directory_path() / "storm_sim_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "dataset.csv";
    write_dataset_csv(path, dataset);
    const auto back = read_dataset_csv(path);
    REQUIRE(back.rows.size() == dataset.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        CHECK(back.rows[i].f1_conn_request_rate == dataset.rows[i].f1_conn_request_rate);
        CHECK(back.rows[i].f4_r1_ratio == dataset.rows[i].f4_r1_ratio);
        CHECK(back.rows[i].f5_resource_occupancy == dataset.rows[i].f5_resource_occupancy);
        CHECK(back.rows[i].label == dataset.rows[i].label);
    }
    CHECK(back.feat_min == dataset.feat_min);
    CHECK(back.provenance == dataset.provenance);
}
