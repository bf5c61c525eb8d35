#include <cmath>
#include <vector>

#include <doctest.h>

#include "storm/common.hpp"
#include "storm/ids.hpp"
#include "storm/net.hpp"
#include "storm/rng.hpp"
#include "storm/sim.hpp"

using namespace storm;
using namespace storm::net;

namespace {

MlpModel zero_map_model() {
    // 5-4-2-4-5 with all-zero parameters and identity activations
    MlpModel m = make_autoencoder(5, {4, 2}, 0, 1.0);
    for (auto& layer : m.layers) {
        layer.activation = Activation::Identity;
        std::fill(layer.weights.begin(), layer.weights.end(), 0.0);
        std::fill(layer.biases.begin(), layer.biases.end(), 0.0);
    }
    return m;
}

MlpModel identity_model(int n) {
    MlpModel m;
    m.input_dim = n;
    m.bottleneck_dim = n;
    DenseLayer layer;
    layer.in_dim = n;
    layer.out_dim = n;
    layer.activation = Activation::Identity;
    layer.weights.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) layer.weights[i * n + i] = 1.0;
    layer.biases.assign(n, 0.0);
    m.layers.push_back(layer);
    return m;
}

}  // namespace

TEST_CASE("zero map sends every input to zero") {
    const auto m = zero_map_model();
    const auto out = reconstruct(m, {1, 0, 0, 0, 0});
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("identity-weight layer reproduces the input exactly") {
    const auto m = identity_model(5);
    const std::vector<double> x{0.2, 0.4, 0.1, 0.9, 0.5};
    const auto out = reconstruct(m, x);
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(out[j] == x[j]);
}

TEST_CASE("seed-42 autoencoder reproduces its frozen forward output") {
    // regression pin for the init scheme; recompute if initialization changes
    const auto m = make_autoencoder(5, {4, 2}, 42, 1.0);
    const auto out = reconstruct(m, {0.5, 0.5, 0.5, 0.5, 0.5});
    const std::vector<double> golden{0.048561737060864765, 0.015257371597111767,
                                     0.0017762314199634855, 0.048151817639582595,
                                     -0.0013895463664485436};
    for (std::size_t j = 0; j < golden.size(); ++j)
        CHECK(out[j] == doctest::Approx(golden[j]).epsilon(1e-12));
}

TEST_CASE("forward rejects mismatched input width") {
    const auto m = zero_map_model();
    CHECK_THROWS_AS(forward(m, {1.0, 2.0}), RejectedInput);
}

TEST_CASE("autoencoder builder rejects a non-compressing bottleneck") {
    CHECK_THROWS_AS(make_autoencoder(5, {5}, 0), RejectedInput);
    CHECK_THROWS_AS(make_autoencoder(5, {6, 7}, 0), RejectedInput);
}

TEST_CASE("autoencoder output width always matches the input") {
    RngStream rng(77);
    for (int i = 0; i < 10; ++i) {
        const auto m = make_autoencoder(5, {4, 2}, rng.next_u64());
        std::vector<double> x(5);
        for (double& v : x) v = rng.uniform01();
        const auto trace = forward(m, x);
        CHECK(trace.output().size() == 5);
        CHECK(m.bottleneck_dim == 2);
        CHECK(trace.activations[2].size() == 2);  // bottleneck activation
    }
}

TEST_CASE("training step on a perfectly reconstructing model is a no-op") {
    auto m = identity_model(5);
    const auto before = m.layers[0].weights;
    const double loss = train_step(m, {{0.3, 0.1, 0.7, 0.2, 0.9}}, 0.1);
    CHECK(loss == 0.0);
    CHECK(m.layers[0].weights == before);
}

TEST_CASE("one hand-computed gradient step on a scalar linear model") {
    // w=0, x=1: loss (1-0)^2 = 1, dloss/dw = -2, step lr=0.1 -> w=0.2
    MlpModel m;
    m.input_dim = 1;
    m.bottleneck_dim = 1;
    DenseLayer layer;
    layer.in_dim = 1;
    layer.out_dim = 1;
    layer.activation = Activation::Identity;
    layer.weights = {0.0};
    layer.biases = {0.0};
    m.layers.push_back(layer);

    const double loss = train_step(m, {{1.0}}, 0.1);
    CHECK(loss == doctest::Approx(1.0));
    CHECK(m.layers[0].weights[0] == doctest::Approx(0.2));
}

TEST_CASE("loss settles on a fixed batch") {
    RngStream rng(11);
    std::vector<std::vector<double>> batch;
    for (int i = 0; i < 16; ++i) {
        std::vector<double> x(5);
        for (double& v : x) v = 0.3 + 0.2 * rng.uniform01();
        batch.push_back(x);
    }
    auto m = make_autoencoder(5, {4, 2}, 3);
    std::vector<double> losses;
    for (int step = 0; step < 60; ++step) losses.push_back(train_step(m, batch, 0.01));
    for (std::size_t i = 11; i < losses.size(); ++i) CHECK(losses[i] <= losses[i - 1] + 1e-12);
}

TEST_CASE("diverging training raises") {
    auto m = make_autoencoder(5, {4, 2}, 3);
    std::vector<std::vector<double>> batch{{1e150, 1e150, 1e150, 1e150, 1e150}};
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 50; ++i) train_step(m, batch, 10.0);
        }(),
        TrainingDiverged);
}

TEST_CASE("training is bit-reproducible under one config") {
    RngStream rng(19);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 64; ++i) {
        std::vector<double> x(5);
        for (double& v : x) v = rng.uniform01();
        rows.push_back(x);
    }
    TrainConfig cfg;
    cfg.epochs = 20;
    cfg.seed = 5;
    auto a = make_autoencoder(5, {4, 2}, cfg.seed);
    auto b = make_autoencoder(5, {4, 2}, cfg.seed);
    train(a, rows, cfg);
    train(b, rows, cfg);
    for (std::size_t l = 0; l < a.layers.size(); ++l) {
        CHECK(a.layers[l].weights == b.layers[l].weights);
        CHECK(a.layers[l].biases == b.layers[l].biases);
    }
}

TEST_CASE("training collapses the loss on sparse normal traffic") {
    sim::SimConfig cfg;
    cfg.duration_s = 50.0;
    cfg.window_ms = 100;
    cfg.benign_ue_count = 2;
    cfg.benign_request_rate_hz = 0.2;
    cfg.seed = 5;
    const auto windows = sim::extract_features(sim::simulate(cfg), cfg);
    REQUIRE(windows.size() == 500);
    std::vector<std::vector<double>> raw;
    for (const auto& w : windows) raw.push_back(w.features());
    const auto scaler = storm::ids::Scaler::fit(raw);
    std::vector<std::vector<double>> scaled;
    for (const auto& r : raw) scaled.push_back(scaler.transform(r));

    auto model = make_autoencoder(5, {4, 2}, 7);
    TrainConfig tc;
    tc.epochs = 400;
    tc.learning_rate = 0.05;
    tc.seed = 11;
    const auto losses = train(model, scaled, tc);
    CHECK(losses.back() < 0.05 * losses.front());
}

TEST_CASE("distance gradient is zero for a perfect reconstruction") {
    const auto m = identity_model(5);
    const auto g = input_gradient(m, {0.5, 0.2, 0.8, 0.1, 0.4});
    for (double v : g) CHECK(v == 0.0);
}

TEST_CASE("distance gradient of the zero map is the normalized input") {
    const auto m = zero_map_model();
    const auto g = input_gradient(m, {3, 4, 0, 0, 0});
    CHECK(g[0] == doctest::Approx(0.6));
    CHECK(g[1] == doctest::Approx(0.8));
    CHECK(g[2] == doctest::Approx(0.0));
    CHECK(g[3] == doctest::Approx(0.0));
    CHECK(g[4] == doctest::Approx(0.0));
}

TEST_CASE("finite differences on known functions") {
    const auto constant = [](const std::vector<double>&) { return 3.5; };
    auto g = finite_diff_gradient(constant, {1.0, 2.0, 3.0}, 1e-5);
    for (double v : g) CHECK(std::fabs(v) < 1e-9);

    const auto dot_square = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    g = finite_diff_gradient(dot_square, {1.0, 2.0}, 1e-5);
    CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(g[1] == doctest::Approx(4.0).epsilon(1e-6));

    CHECK_THROWS_AS(finite_diff_gradient(constant, {1.0}, 0.0), RejectedInput);
}

TEST_CASE("backprop input gradient matches central differences") {
    RngStream rng(99);
    int checked = 0;
    while (checked < 50) {
        const auto m = make_autoencoder(5, {4, 2}, rng.next_u64());
        std::vector<double> x(5);
        for (double& v : x) v = rng.uniform01();
        if (reconstruction_distance(m, x) <= 1e-3) continue;
        ++checked;
        const auto g = input_gradient(m, x);
        const auto fd = finite_diff_gradient(
            [&m](const std::vector<double>& p) { return reconstruction_distance(m, p); }, x, 1e-5);
        for (int j = 0; j < 5; ++j) {
            const double scale = std::max(std::fabs(fd[j]), 1e-8);
            CHECK(std::fabs(g[j] - fd[j]) / scale < 1e-4);
        }
    }
}

TEST_CASE("model json round-trip is value-exact") {
    const auto m = make_autoencoder(5, {4, 2}, 42);
    const auto j = model_to_json(m);
    const auto back = model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.input_dim == m.input_dim);
    CHECK(back.bottleneck_dim == m.bottleneck_dim);
    REQUIRE(back.layers.size() == m.layers.size());
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        CHECK(back.layers[l].weights == m.layers[l].weights);
        CHECK(back.layers[l].biases == m.layers[l].biases);
        CHECK(back.layers[l].activation == m.layers[l].activation);
    }
}
