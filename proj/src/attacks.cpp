#include "storm/attacks.hpp"

#include <algorithm>
#include <cmath>

#include "storm/io.hpp"
#include "storm/rng.hpp"

namespace storm::attacks {

namespace {

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void resolve_domain(std::size_t dim, std::vector<double>& lo, std::vector<double>& hi) {
    if (lo.empty()) lo.assign(dim, 0.0);
    if (hi.empty()) hi.assign(dim, 1.0);
    if (lo.size() != dim || hi.size() != dim) throw RejectedInput("clip bounds width mismatch");
}

// One signed step, then projection onto the eps-ball around the original
// and onto the feature domain. FGSM is this with alpha = eps, so the two
// share every rounding step.
std::vector<double> descend_and_project(const std::vector<double>& current,
                                        const std::vector<double>& original,
                                        const std::vector<double>& grad, double alpha, double eps,
                                        const std::vector<double>& lo,
                                        const std::vector<double>& hi) {
    std::vector<double> next(current.size());
    for (std::size_t j = 0; j < current.size(); ++j) {
        double v = current[j] - alpha * sign(grad[j]);
        v = std::clamp(v, original[j] - eps, original[j] + eps);
        next[j] = std::clamp(v, lo[j], hi[j]);
    }
    return next;
}

}  // namespace

const char* to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::FGSM: return "fgsm";
        case AttackKind::PGD: return "pgd";
        case AttackKind::BIM: return "bim";
        case AttackKind::Gaussian: return "gaussian";
        case AttackKind::NoAttack: return "none";
    }
    return "none";
}

AttackKind attack_kind_from_string(const std::string& name) {
    if (name == "fgsm") return AttackKind::FGSM;
    if (name == "pgd") return AttackKind::PGD;
    if (name == "bim") return AttackKind::BIM;
    if (name == "gaussian") return AttackKind::Gaussian;
    if (name == "none" || name == "noattack") return AttackKind::NoAttack;
    throw RejectedInput("unknown attack kind: " + name);
}

std::vector<double> fgsm(const ids::IdsModel& ids, const std::vector<double>& x_scaled, double eps,
                         const std::vector<double>& clip_lo, const std::vector<double>& clip_hi) {
    if (eps < 0.0) throw RejectedInput("epsilon must be nonnegative");
    if (eps == 0.0) return x_scaled;
    std::vector<double> lo = clip_lo, hi = clip_hi;
    resolve_domain(x_scaled.size(), lo, hi);
    const auto grad = net::input_gradient(ids.autoencoder, x_scaled);
    return descend_and_project(x_scaled, x_scaled, grad, eps, eps, lo, hi);
}

std::vector<double> bim(const ids::IdsModel& ids, const std::vector<double>& x_scaled, double eps,
                        double alpha, int steps, const std::vector<double>& clip_lo,
                        const std::vector<double>& clip_hi) {
    if (eps < 0.0) throw RejectedInput("epsilon must be nonnegative");
    if (steps < 1 || alpha < 0.0 || alpha > eps + 1e-15)
        throw RejectedInput("iterative attack needs steps >= 1 and 0 <= alpha <= eps");
    if (eps == 0.0) return x_scaled;
    std::vector<double> lo = clip_lo, hi = clip_hi;
    resolve_domain(x_scaled.size(), lo, hi);
    std::vector<double> x = x_scaled;
    for (int k = 0; k < steps; ++k) {
        const auto grad = net::input_gradient(ids.autoencoder, x);
        x = descend_and_project(x, x_scaled, grad, alpha, eps, lo, hi);
    }
    return x;
}

std::vector<double> pgd(const ids::IdsModel& ids, const std::vector<double>& x_scaled, double eps,
                        double alpha, int steps, std::uint64_t seed,
                        const std::vector<double>& clip_lo, const std::vector<double>& clip_hi) {
    if (eps < 0.0) throw RejectedInput("epsilon must be nonnegative");
    if (steps < 1 || alpha < 0.0 || alpha > eps + 1e-15)
        throw RejectedInput("iterative attack needs steps >= 1 and 0 <= alpha <= eps");
    if (eps == 0.0) return x_scaled;  // random start collapses
    std::vector<double> lo = clip_lo, hi = clip_hi;
    resolve_domain(x_scaled.size(), lo, hi);
    RngStream rng(seed);
    std::vector<double> x(x_scaled.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = std::clamp(x_scaled[j] + rng.uniform(-eps, eps), lo[j], hi[j]);
    for (int k = 0; k < steps; ++k) {
        const auto grad = net::input_gradient(ids.autoencoder, x);
        x = descend_and_project(x, x_scaled, grad, alpha, eps, lo, hi);
    }
    return x;
}

std::vector<double> gaussian(const std::vector<double>& x_scaled, double eps, std::uint64_t seed,
                             const std::vector<double>& clip_lo,
                             const std::vector<double>& clip_hi) {
    if (eps < 0.0) throw RejectedInput("epsilon must be nonnegative");
    if (eps == 0.0) return x_scaled;
    std::vector<double> lo = clip_lo, hi = clip_hi;
    resolve_domain(x_scaled.size(), lo, hi);
    RngStream rng(seed);
    std::vector<double> x(x_scaled.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = std::clamp(x_scaled[j] + eps * rng.normal(), lo[j], hi[j]);
    return x;
}

AdversarialBatch attack_batch(const ids::IdsModel& ids,
                              const std::vector<sim::WindowFeatures>& rows,
                              const AttackConfig& config) {
    if (rows.empty()) throw RejectedInput("empty attack batch");
    for (const auto& row : rows)
        if (row.label != sim::Label::Attack)
            throw RejectedInput("attack batches may only contain Attack-labeled rows");

    AdversarialBatch batch;
    batch.originals = rows;
    batch.config = config;
    batch.originals_scaled.reserve(rows.size());
    batch.perturbed.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto scaled = ids.scaler.transform(rows[i].features());
        batch.originals_scaled.push_back(scaled);
        const std::uint64_t row_seed = derive_seed(config.seed, "attack.row", i);
        switch (config.kind) {
            case AttackKind::NoAttack:
                batch.perturbed.push_back(scaled);
                break;
            case AttackKind::FGSM:
                batch.perturbed.push_back(
                    fgsm(ids, scaled, config.epsilon, config.clip_lo, config.clip_hi));
                break;
            case AttackKind::BIM:
                batch.perturbed.push_back(bim(ids, scaled, config.epsilon, config.step_alpha,
                                              config.steps, config.clip_lo, config.clip_hi));
                break;
            case AttackKind::PGD:
                batch.perturbed.push_back(pgd(ids, scaled, config.epsilon, config.step_alpha,
                                              config.steps, row_seed, config.clip_lo,
                                              config.clip_hi));
                break;
            case AttackKind::Gaussian:
                batch.perturbed.push_back(
                    gaussian(scaled, config.epsilon, row_seed, config.clip_lo, config.clip_hi));
                break;
        }
    }
    return batch;
}

void write_batch_csv(const std::filesystem::path& path, const AdversarialBatch& batch) {
    std::string out = "method,epsilon";
    for (int j = 1; j <= kFeatureCount; ++j) out += ",orig_f" + std::to_string(j);
    for (int j = 1; j <= kFeatureCount; ++j) out += ",pert_f" + std::to_string(j);
    out += "\n";
    for (std::size_t i = 0; i < batch.perturbed.size(); ++i) {
        std::vector<std::string> fields{to_string(batch.config.kind),
                                        io::format_double(batch.config.epsilon)};
        for (double v : batch.originals_scaled[i]) fields.push_back(io::format_double(v));
        for (double v : batch.perturbed[i]) fields.push_back(io::format_double(v));
        out += io::join_csv(fields);
    }
    io::write_text_file(path, out);
}

}  // namespace storm::attacks
