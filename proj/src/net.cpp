#include "storm/net.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "storm/common.hpp"
#include "storm/rng.hpp"

namespace storm::net {

const char* to_string(Activation a) {
    switch (a) {
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Identity: return "identity";
    }
    return "identity";
}

Activation activation_from_string(const std::string& name) {
    if (name == "relu") return Activation::ReLU;
    if (name == "tanh") return Activation::Tanh;
    if (name == "identity") return Activation::Identity;
    throw RejectedInput("unknown activation: " + name);
}

namespace {

double apply_activation(Activation a, double z) {
    switch (a) {
        case Activation::ReLU: return z > 0.0 ? z : 0.0;
        case Activation::Tanh: return std::tanh(z);
        case Activation::Identity: return z;
    }
    return z;
}

// Derivative expressed through the post-activation value.
double activation_grad(Activation a, double out) {
    switch (a) {
        case Activation::ReLU: return out > 0.0 ? 1.0 : 0.0;
        case Activation::Tanh: return 1.0 - out * out;
        case Activation::Identity: return 1.0;
    }
    return 1.0;
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void validate(const MlpModel& model) {
    if (model.layers.empty()) throw RejectedInput("model has no layers");
    if (model.layers.front().in_dim != model.input_dim)
        throw RejectedInput("first layer input does not match input_dim");
    int prev = model.input_dim;
    for (const auto& layer : model.layers) {
        if (layer.in_dim != prev) throw RejectedInput("layer dimensions do not chain");
        if (static_cast<int>(layer.weights.size()) != layer.in_dim * layer.out_dim)
            throw RejectedInput("weight count does not match layer dims");
        if (static_cast<int>(layer.biases.size()) != layer.out_dim)
            throw RejectedInput("bias count does not match layer rows");
        if (!all_finite(layer.weights) || !all_finite(layer.biases))
            throw RejectedInput("non-finite layer parameters");
        prev = layer.out_dim;
    }
}

MlpModel make_mlp(const std::vector<int>& dims, const std::vector<Activation>& activations,
                  std::uint64_t seed, double init_scale) {
    if (dims.size() < 2) throw RejectedInput("need at least input and output dims");
    if (activations.size() != dims.size() - 1)
        throw RejectedInput("one activation per layer required");
    MlpModel model;
    model.input_dim = dims.front();
    model.bottleneck_dim = *std::min_element(dims.begin() + 1, dims.end());
    RngStream rng(seed);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        DenseLayer layer;
        layer.in_dim = dims[l];
        layer.out_dim = dims[l + 1];
        layer.activation = activations[l];
        const double bound = init_scale / std::sqrt(static_cast<double>(layer.in_dim));
        layer.weights.resize(static_cast<std::size_t>(layer.in_dim) * layer.out_dim);
        for (double& w : layer.weights) w = rng.uniform(-bound, bound);
        layer.biases.assign(layer.out_dim, 0.0);
        model.layers.push_back(std::move(layer));
    }
    validate(model);
    return model;
}

MlpModel make_autoencoder(int input_dim, const std::vector<int>& encoder_dims,
                          std::uint64_t seed, double init_scale) {
    if (input_dim < 1 || encoder_dims.empty())
        throw RejectedInput("autoencoder needs an input dim and hidden dims");
    std::vector<int> dims;
    dims.push_back(input_dim);
    for (int d : encoder_dims) dims.push_back(d);
    for (auto it = encoder_dims.rbegin() + 1; it != encoder_dims.rend(); ++it)
        dims.push_back(*it);
    dims.push_back(input_dim);
    const int narrowest = *std::min_element(encoder_dims.begin(), encoder_dims.end());
    if (narrowest >= input_dim)
        throw RejectedInput("bottleneck must be narrower than the input");
    std::vector<Activation> acts(dims.size() - 1, Activation::Tanh);
    acts.back() = Activation::Identity;
    MlpModel model = make_mlp(dims, acts, seed, init_scale);
    model.bottleneck_dim = narrowest;
    return model;
}

ForwardTrace forward(const MlpModel& model, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != model.input_dim)
        throw RejectedInput("input length does not match model input_dim");
    if (!all_finite(x)) throw RejectedInput("non-finite input");
    ForwardTrace trace;
    trace.activations.reserve(model.layers.size() + 1);
    trace.activations.push_back(x);
    for (const auto& layer : model.layers) {
        const auto& in = trace.activations.back();
        std::vector<double> out(layer.out_dim);
        for (int r = 0; r < layer.out_dim; ++r) {
            double z = layer.biases[r];
            const double* wrow = layer.weights.data() + static_cast<std::size_t>(r) * layer.in_dim;
            for (int c = 0; c < layer.in_dim; ++c) z += wrow[c] * in[c];
            out[r] = apply_activation(layer.activation, z);
        }
        trace.activations.push_back(std::move(out));
    }
    return trace;
}

std::vector<double> reconstruct(const MlpModel& model, const std::vector<double>& x) {
    return forward(model, x).output();
}

double reconstruction_distance(const MlpModel& model, const std::vector<double>& x) {
    const auto x_hat = reconstruct(model, x);
    double sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double r = x[j] - x_hat[j];
        sq += r * r;
    }
    return std::sqrt(sq);
}

double train_step(MlpModel& model, const std::vector<std::vector<double>>& batch, double lr) {
    if (batch.empty()) throw RejectedInput("empty batch");
    const std::size_t n_layers = model.layers.size();
    std::vector<std::vector<double>> grad_w(n_layers), grad_b(n_layers);
    for (std::size_t l = 0; l < n_layers; ++l) {
        grad_w[l].assign(model.layers[l].weights.size(), 0.0);
        grad_b[l].assign(model.layers[l].biases.size(), 0.0);
    }

    const double inv_batch = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (const auto& x : batch) {
        const ForwardTrace trace = forward(model, x);
        const auto& x_hat = trace.output();
        // delta = d loss / d output, loss = mean_b ||x - x_hat||^2
        std::vector<double> delta(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double r = x_hat[j] - x[j];
            loss += r * r * inv_batch;
            delta[j] = 2.0 * r * inv_batch;
        }
        for (std::size_t l = n_layers; l-- > 0;) {
            const auto& layer = model.layers[l];
            const auto& in = trace.activations[l];
            const auto& out = trace.activations[l + 1];
            for (int r = 0; r < layer.out_dim; ++r) delta[r] *= activation_grad(layer.activation, out[r]);
            double* gw = grad_w[l].data();
            for (int r = 0; r < layer.out_dim; ++r) {
                const double d = delta[r];
                grad_b[l][r] += d;
                double* gw_row = gw + static_cast<std::size_t>(r) * layer.in_dim;
                for (int c = 0; c < layer.in_dim; ++c) gw_row[c] += d * in[c];
            }
            if (l > 0) {
                std::vector<double> prev(layer.in_dim, 0.0);
                for (int r = 0; r < layer.out_dim; ++r) {
                    const double d = delta[r];
                    const double* wrow =
                        layer.weights.data() + static_cast<std::size_t>(r) * layer.in_dim;
                    for (int c = 0; c < layer.in_dim; ++c) prev[c] += wrow[c] * d;
                }
                delta = std::move(prev);
            }
        }
    }

    if (!std::isfinite(loss)) throw TrainingDiverged("non-finite loss; lower the learning rate");

    for (std::size_t l = 0; l < n_layers; ++l) {
        auto& layer = model.layers[l];
        for (std::size_t i = 0; i < layer.weights.size(); ++i) layer.weights[i] -= lr * grad_w[l][i];
        for (std::size_t i = 0; i < layer.biases.size(); ++i) layer.biases[i] -= lr * grad_b[l][i];
        if (!all_finite(layer.weights) || !all_finite(layer.biases))
            throw TrainingDiverged("non-finite weights after update; lower the learning rate");
    }
    return loss;
}

std::vector<double> train(MlpModel& model, const std::vector<std::vector<double>>& rows,
                          const TrainConfig& config) {
    if (rows.empty()) throw RejectedInput("no training rows");
    if (config.learning_rate <= 0.0 || config.epochs < 1 || config.batch_size < 1)
        throw RejectedInput("invalid training config");
    RngStream rng(derive_seed(config.seed, "train.shuffle"));
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> epoch_losses;
    epoch_losses.reserve(config.epochs);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.index(i)]);
        double total = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            std::vector<std::vector<double>> batch;
            batch.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) batch.push_back(rows[order[i]]);
            total += train_step(model, batch, config.learning_rate);
            ++batches;
        }
        epoch_losses.push_back(total / static_cast<double>(batches));
    }
    return epoch_losses;
}

std::vector<double> input_gradient(const MlpModel& model, const std::vector<double>& x) {
    const ForwardTrace trace = forward(model, x);
    const auto& x_hat = trace.output();
    std::vector<double> residual(x.size());
    double sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        residual[j] = x[j] - x_hat[j];
        sq += residual[j] * residual[j];
    }
    const double dist = std::sqrt(sq);
    if (dist == 0.0) return std::vector<double>(x.size(), 0.0);

    // d = ||x - x_hat||: direct term r/d plus -J^T (r/d) through the net.
    std::vector<double> delta(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) delta[j] = -residual[j] / dist;
    for (std::size_t l = model.layers.size(); l-- > 0;) {
        const auto& layer = model.layers[l];
        const auto& out = trace.activations[l + 1];
        for (int r = 0; r < layer.out_dim; ++r) delta[r] *= activation_grad(layer.activation, out[r]);
        std::vector<double> prev(layer.in_dim, 0.0);
        for (int r = 0; r < layer.out_dim; ++r) {
            const double d = delta[r];
            const double* wrow = layer.weights.data() + static_cast<std::size_t>(r) * layer.in_dim;
            for (int c = 0; c < layer.in_dim; ++c) prev[c] += wrow[c] * d;
        }
        delta = std::move(prev);
    }
    std::vector<double> grad(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) grad[j] = residual[j] / dist + delta[j];
    return grad;
}

std::vector<double> finite_diff_gradient(const std::function<double(const std::vector<double>&)>& f,
                                         std::vector<double> x, double h) {
    if (h <= 0.0) throw RejectedInput("finite-difference step must be positive");
    std::vector<double> grad(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double saved = x[j];
        x[j] = saved + h;
        const double hi = f(x);
        x[j] = saved - h;
        const double lo = f(x);
        x[j] = saved;
        grad[j] = (hi - lo) / (2.0 * h);
    }
    return grad;
}

nlohmann::json model_to_json(const MlpModel& model) {
    nlohmann::json j;
    j["format_version"] = 1;
    std::vector<int> dims{model.input_dim};
    for (const auto& layer : model.layers) dims.push_back(layer.out_dim);
    j["dims"] = dims;
    j["bottleneck_dim"] = model.bottleneck_dim;
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : model.layers) {
        layers.push_back({{"activation", to_string(layer.activation)},
                          {"weights", layer.weights},
                          {"biases", layer.biases}});
    }
    j["layers"] = layers;
    return j;
}

MlpModel model_from_json(const nlohmann::json& j) {
    if (j.value("format_version", 0) != 1) throw RejectedInput("unsupported model format version");
    const auto dims = j.at("dims").get<std::vector<int>>();
    MlpModel model;
    model.input_dim = dims.front();
    model.bottleneck_dim = j.value("bottleneck_dim", 0);
    std::size_t l = 0;
    for (const auto& jl : j.at("layers")) {
        DenseLayer layer;
        layer.in_dim = dims[l];
        layer.out_dim = dims[l + 1];
        layer.activation = activation_from_string(jl.at("activation").get<std::string>());
        layer.weights = jl.at("weights").get<std::vector<double>>();
        layer.biases = jl.at("biases").get<std::vector<double>>();
        model.layers.push_back(std::move(layer));
        ++l;
    }
    validate(model);
    return model;
}

}  // namespace storm::net
