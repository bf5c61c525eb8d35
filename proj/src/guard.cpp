#include "storm/guard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "storm/io.hpp"
#include "storm/rng.hpp"

namespace storm::guard {

namespace {

double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(values.size() - 1, lo + 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double gauss_kernel(double u) {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
}

double kde_at(const KdeEstimate& kde, double value) {
    double total = 0.0;
    for (double s : kde.samples) total += gauss_kernel((value - s) / kde.bandwidth);
    return total / (static_cast<double>(kde.samples.size()) * kde.bandwidth);
}

}  // namespace

const char* to_string(Mode mode) {
    return mode == Mode::KdeDensity ? "kde_density" : "gaussian_range";
}

Mode mode_from_string(const std::string& name) {
    if (name == "gaussian_range") return Mode::GaussianRange;
    if (name == "kde_density") return Mode::KdeDensity;
    throw RejectedInput("unknown guard mode: " + name);
}

double silverman_bandwidth(const std::vector<double>& values, double floor) {
    if (values.empty()) throw RejectedInput("bandwidth needs at least one sample");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);
    const double iqr = quantile(values, 0.75) - quantile(values, 0.25);
    const double spread = std::min(sd, iqr / 1.34);
    return std::max(floor, 0.9 * spread * std::pow(n, -0.2));
}

ShapProfile fit_profile(const std::vector<std::vector<double>>& scaled_rows,
                        const ids::IdsModel& ids, const explain::ExplainerSettings& explainer,
                        const explain::BackgroundSet& bg, const GuardConfig& cfg) {
    if (scaled_rows.size() < 30)
        throw InsufficientData("profile fitting needs at least 30 rows");
    if (cfg.lambda <= 0.0 || cfg.sigma_floor <= 0.0)
        throw RejectedInput("lambda and sigma_floor must be positive");

    const explain::ScoreFn score = [&ids](const std::vector<double>& x) {
        return ids.score_scaled(x);
    };

    const std::size_t m = scaled_rows.front().size();
    std::vector<std::vector<double>> per_feature(m);
    for (std::size_t i = 0; i < scaled_rows.size(); ++i) {
        explain::ExplainerSettings row_settings = explainer;
        row_settings.seed = derive_seed(explainer.seed, "profile.fit", i);
        const auto ex = explain::explain(score, scaled_rows[i], bg, row_settings);
        for (std::size_t j = 0; j < m; ++j) per_feature[j].push_back(ex.attributions[j]);
    }

    ShapProfile profile;
    profile.n_fit = static_cast<int>(scaled_rows.size());
    profile.explainer_method = explainer.method;
    profile.mu.resize(m);
    profile.sigma.resize(m);
    const double n = static_cast<double>(scaled_rows.size());
    for (std::size_t j = 0; j < m; ++j) {
        double mean = 0.0;
        for (double v : per_feature[j]) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : per_feature[j]) var += (v - mean) * (v - mean);
        profile.mu[j] = mean;
        profile.sigma[j] = std::max(cfg.sigma_floor, std::sqrt(var / n));
    }

    if (cfg.mode == Mode::KdeDensity) {
        if (cfg.kde_density_quantile <= 0.0 || cfg.kde_density_quantile >= 1.0)
            throw RejectedInput("kde_density_quantile must lie in (0,1)");
        profile.kde.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
            KdeEstimate& kde = profile.kde[j];
            kde.samples = per_feature[j];
            kde.bandwidth = silverman_bandwidth(kde.samples, cfg.sigma_floor);
            std::vector<double> densities;
            densities.reserve(kde.samples.size());
            for (double s : kde.samples) densities.push_back(kde_at(kde, s));
            kde.density_floor = quantile(densities, cfg.kde_density_quantile);
        }
    }
    return profile;
}

GuardVerdict check(const ShapProfile& profile, const explain::Explanation& explanation,
                   const GuardConfig& cfg) {
    if (explanation.method != profile.explainer_method)
        throw RejectedInput("explanation method does not match the fitted profile");
    if (explanation.attributions.size() != profile.mu.size())
        throw RejectedInput("attribution width does not match the fitted profile");
    if (cfg.mode == Mode::KdeDensity && profile.kde.empty())
        throw RejectedInput("profile carries no KDE fit for KdeDensity mode");

    GuardVerdict verdict;
    verdict.margins.resize(profile.mu.size());
    for (std::size_t j = 0; j < profile.mu.size(); ++j) {
        const double s = explanation.attributions[j];
        const double deviation = std::fabs(s - profile.mu[j]);
        verdict.margins[j] = deviation / profile.sigma[j];
        bool violates;
        if (cfg.mode == Mode::GaussianRange) {
            // inclusive bounds: sitting exactly on mu +- lambda sigma is normal
            violates = deviation > cfg.lambda * profile.sigma[j];
        } else {
            violates = kde_at(profile.kde[j], s) < profile.kde[j].density_floor;
        }
        if (violates) verdict.violating_features.push_back(static_cast<int>(j));
    }
    verdict.decision =
        verdict.violating_features.empty() ? Decision::Normal : Decision::Attack;
    return verdict;
}

Decision mitigate(const ids::IdsVerdict& ids_verdict, const GuardVerdict& guard_verdict) {
    if (guard_verdict.decision == Decision::Attack) return Decision::Attack;
    return ids_verdict.predicted;
}

double kde_density(const ShapProfile& profile, int feature, double value) {
    if (profile.kde.empty()) throw RejectedInput("profile carries no KDE fit");
    if (feature < 0 || feature >= static_cast<int>(profile.kde.size()))
        throw RejectedInput("feature index out of range");
    return kde_at(profile.kde[static_cast<std::size_t>(feature)], value);
}

nlohmann::json profile_to_json(const ShapProfile& profile) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["mu"] = profile.mu;
    j["sigma"] = profile.sigma;
    j["n_fit"] = profile.n_fit;
    j["explainer_method"] = explain::to_string(profile.explainer_method);
    if (!profile.kde.empty()) {
        nlohmann::json kdes = nlohmann::json::array();
        for (const auto& kde : profile.kde)
            kdes.push_back({{"samples", kde.samples},
                            {"bandwidth", kde.bandwidth},
                            {"density_floor", kde.density_floor}});
        j["kde"] = kdes;
    }
    return j;
}

ShapProfile profile_from_json(const nlohmann::json& j) {
    if (j.value("format_version", 0) != 1)
        throw RejectedInput("unsupported profile format version");
    ShapProfile profile;
    profile.mu = j.at("mu").get<std::vector<double>>();
    profile.sigma = j.at("sigma").get<std::vector<double>>();
    profile.n_fit = j.at("n_fit").get<int>();
    profile.explainer_method = explain::method_from_string(j.at("explainer_method").get<std::string>());
    if (j.contains("kde")) {
        for (const auto& jk : j.at("kde")) {
            KdeEstimate kde;
            kde.samples = jk.at("samples").get<std::vector<double>>();
            kde.bandwidth = jk.at("bandwidth").get<double>();
            kde.density_floor = jk.at("density_floor").get<double>();
            profile.kde.push_back(std::move(kde));
        }
    }
    return profile;
}

void write_verdicts_csv(const std::filesystem::path& path,
                        const std::vector<GuardVerdict>& verdicts) {
    std::string out = "decision,violating_features";
    const std::size_t m = verdicts.empty() ? kFeatureCount : verdicts.front().margins.size();
    for (std::size_t j = 1; j <= m; ++j) out += ",margin_f" + std::to_string(j);
    out += "\n";
    for (const auto& v : verdicts) {
        std::string viol;
        for (std::size_t k = 0; k < v.violating_features.size(); ++k) {
            if (k) viol.push_back(';');
            viol += "f" + std::to_string(v.violating_features[k] + 1);
        }
        std::vector<std::string> fields{storm::to_string(v.decision), viol};
        for (double mgn : v.margins) fields.push_back(io::format_double(mgn));
        out += io::join_csv(fields);
    }
    io::write_text_file(path, out);
}

}  // namespace storm::guard
