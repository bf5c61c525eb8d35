#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace storm::net {

enum class Activation { ReLU, Tanh, Identity };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& name);

struct DenseLayer {
    int in_dim = 0;
    int out_dim = 0;
    std::vector<double> weights;  // row-major, out_dim x in_dim
    std::vector<double> biases;   // out_dim
    Activation activation = Activation::Identity;
};

// Plain stack of dense layers. For autoencoders the first and last
// dimensions both equal input_dim and bottleneck_dim is the narrowest
// hidden width.
struct MlpModel {
    std::vector<DenseLayer> layers;
    int input_dim = 0;
    int bottleneck_dim = 0;
};

struct TrainConfig {
    double learning_rate = 0.01;
    int epochs = 300;
    int batch_size = 32;
    std::uint64_t seed = 0;
    double init_scale = 1.0;  // layer init bound = init_scale / sqrt(fan_in)
};

struct ForwardTrace {
    // Post-activation values, input first, reconstruction last.
    std::vector<std::vector<double>> activations;
    const std::vector<double>& output() const { return activations.back(); }
};

// Throws RejectedInput if layer dimensions do not chain or values are not finite.
void validate(const MlpModel& model);

MlpModel make_mlp(const std::vector<int>& dims, const std::vector<Activation>& activations,
                  std::uint64_t seed, double init_scale = 1.0);

// Symmetric hourglass: input -> hidden dims -> mirrored -> input, Tanh hidden
// layers, Identity output. Requires the narrowest width < input_dim.
MlpModel make_autoencoder(int input_dim, const std::vector<int>& encoder_dims,
                          std::uint64_t seed, double init_scale = 1.0);

ForwardTrace forward(const MlpModel& model, const std::vector<double>& x);
std::vector<double> reconstruct(const MlpModel& model, const std::vector<double>& x);

// Euclidean distance d(x, x_hat) between input and reconstruction.
double reconstruction_distance(const MlpModel& model, const std::vector<double>& x);

// One mini-batch gradient-descent step on the mean squared reconstruction
// error (per-sample squared Euclidean error, averaged over the batch).
// Returns the pre-update loss. Throws TrainingDiverged on non-finite values.
double train_step(MlpModel& model, const std::vector<std::vector<double>>& batch, double lr);

// Full training loop: seeded shuffle per epoch, mini-batches of
// config.batch_size. Returns mean loss per epoch.
std::vector<double> train(MlpModel& model, const std::vector<std::vector<double>>& rows,
                          const TrainConfig& config);

// Gradient of the reconstruction distance w.r.t. the input, backpropagated
// through both the residual and the network. Returns the zero vector when
// the distance is exactly zero (subgradient choice).
std::vector<double> input_gradient(const MlpModel& model, const std::vector<double>& x);

// Central finite differences, (f(x+h e_j) - f(x-h e_j)) / 2h per coordinate.
std::vector<double> finite_diff_gradient(const std::function<double(const std::vector<double>&)>& f,
                                         std::vector<double> x, double h);

nlohmann::json model_to_json(const MlpModel& model);
MlpModel model_from_json(const nlohmann::json& j);

}  // namespace storm::net
