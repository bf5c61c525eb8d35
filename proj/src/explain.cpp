#include "storm/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "storm/io.hpp"
#include "storm/rng.hpp"

namespace storm::explain {

namespace {

// In-place Gaussian elimination with partial pivoting on an n x n system.
// Returns false when a pivot collapses (singular system).
bool solve_linear(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[r * n + col]) > std::fabs(a[pivot * n + col])) pivot = r;
        if (std::fabs(a[pivot * n + col]) < 1e-12) return false;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double factor = a[r * n + col] * inv;
            if (factor == 0.0) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= factor * a[col * n + c];
            b[r] -= factor * b[col];
        }
    }
    for (int col = n; col-- > 0;) {
        double v = b[col];
        for (int c = col + 1; c < n; ++c) v -= a[col * n + c] * b[c];
        b[col] = v / a[col * n + col];
    }
    return true;
}

// Background-averaged value of a coalition: features in the mask come from
// x, the rest from each background row in turn.
double coalition_value(const ScoreFn& f, const std::vector<double>& x, const BackgroundSet& bg,
                       unsigned mask) {
    const std::size_t m = x.size();
    const unsigned full = (1u << m) - 1u;
    if (mask == full) return f(x);
    double total = 0.0;
    std::vector<double> composite(m);
    for (const auto& row : bg.rows) {
        for (std::size_t j = 0; j < m; ++j)
            composite[j] = (mask >> j) & 1u ? x[j] : row[j];
        total += f(composite);
    }
    return total / static_cast<double>(bg.rows.size());
}

double shapley_kernel_weight(int m, int size) {
    // (m-1) / (C(m,s) * s * (m-s))
    double binom = 1.0;
    for (int i = 1; i <= size; ++i) binom = binom * (m - size + i) / i;
    return (m - 1) / (binom * size * (m - size));
}

// Solves the constrained weighted regression shared by both kernel modes.
// Coalitions arrive as (mask, weight) pairs; the all-absent and all-present
// endpoints are substituted in exactly.
bool solve_kernel_system(const std::vector<std::pair<unsigned, double>>& coalitions,
                         const std::vector<double>& values, double v_empty, double v_full, int m,
                         std::vector<double>& phi_out) {
    const double delta = v_full - v_empty;
    if (m == 1) {
        phi_out.assign(1, delta);
        return true;
    }
    const int n = m - 1;  // last feature eliminated through the sum constraint
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0), b(n, 0.0), row(n);
    for (std::size_t k = 0; k < coalitions.size(); ++k) {
        const auto [mask, weight] = coalitions[k];
        const double z_last = (mask >> (m - 1)) & 1u ? 1.0 : 0.0;
        for (int j = 0; j < n; ++j) row[j] = (((mask >> j) & 1u) ? 1.0 : 0.0) - z_last;
        const double y = values[k] - v_empty - z_last * delta;
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) a[r * n + c] += weight * row[r] * row[c];
            b[r] += weight * y * row[r];
        }
    }
    if (!solve_linear(a, b, n)) return false;
    phi_out.assign(m, 0.0);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        phi_out[j] = b[j];
        sum += b[j];
    }
    phi_out[m - 1] = delta - sum;
    return true;
}

}  // namespace

const char* to_string(Method method) {
    switch (method) {
        case Method::ShapExact: return "shap_exact";
        case Method::ShapKernel: return "shap_kernel";
        case Method::Lime: return "lime";
        case Method::Permutation: return "permutation";
    }
    return "shap_exact";
}

Method method_from_string(const std::string& name) {
    if (name == "shap_exact" || name == "shap") return Method::ShapExact;
    if (name == "shap_kernel") return Method::ShapKernel;
    if (name == "lime") return Method::Lime;
    if (name == "permutation") return Method::Permutation;
    throw RejectedInput("unknown explainer method: " + name);
}

BackgroundSet BackgroundSet::subsample(const std::vector<std::vector<double>>& source,
                                       std::size_t max_size, std::uint64_t seed) {
    if (source.empty()) throw RejectedInput("background set may not be empty");
    for (const auto& row : source)
        for (double v : row)
            if (v < -1e-9 || v > 1.0 + 1e-9)
                throw RejectedInput("background rows must live in the scaled [0,1] domain");
    BackgroundSet bg;
    if (source.size() <= max_size) {
        bg.rows = source;
        return bg;
    }
    RngStream rng(derive_seed(seed, "background.subsample"));
    std::vector<std::size_t> idx(source.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < max_size; ++i)
        std::swap(idx[i], idx[i + rng.index(idx.size() - i)]);
    bg.rows.reserve(max_size);
    for (std::size_t i = 0; i < max_size; ++i) bg.rows.push_back(source[idx[i]]);
    return bg;
}

std::vector<double> BackgroundSet::feature_means() const {
    std::vector<double> mean(rows.front().size(), 0.0);
    for (const auto& row : rows)
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += row[j];
    for (double& v : mean) v /= static_cast<double>(rows.size());
    return mean;
}

double BackgroundSet::mean_score(const ScoreFn& f) const {
    double total = 0.0;
    for (const auto& row : rows) total += f(row);
    return total / static_cast<double>(rows.size());
}

Explanation shap_exact(const ScoreFn& f, const std::vector<double>& x, const BackgroundSet& bg) {
    const int m = static_cast<int>(x.size());
    if (m < 1) throw RejectedInput("empty input");
    if (m > 12) throw RejectedInput("too many features for exact enumeration; use shap_kernel");

    const unsigned n_masks = 1u << m;
    std::vector<double> value(n_masks);
    for (unsigned mask = 0; mask < n_masks; ++mask)
        value[mask] = coalition_value(f, x, bg, mask);

    std::vector<double> factorial(m + 1, 1.0);
    for (int i = 1; i <= m; ++i) factorial[i] = factorial[i - 1] * i;

    Explanation ex;
    ex.method = Method::ShapExact;
    ex.base_value = value[0];
    ex.target_score = value[n_masks - 1];
    ex.attributions.assign(m, 0.0);
    for (int j = 0; j < m; ++j) {
        const unsigned bit = 1u << j;
        double s = 0.0;
        for (unsigned mask = 0; mask < n_masks; ++mask) {
            if (mask & bit) continue;
            const int t = std::popcount(mask);
            const double w = factorial[t] * factorial[m - t - 1] / factorial[m];
            s += w * (value[mask | bit] - value[mask]);
        }
        ex.attributions[j] = s;
    }
    return ex;
}

Explanation shap_kernel(const ScoreFn& f, const std::vector<double>& x, const BackgroundSet& bg,
                        int n_samples, std::uint64_t seed) {
    const int m = static_cast<int>(x.size());
    if (m < 1) throw RejectedInput("empty input");
    if (n_samples < 2 * m + 2) throw RejectedInput("kernel SHAP needs n_samples >= 2m+2");

    const unsigned full = m >= 32 ? 0u : (1u << m) - 1u;
    const double v_empty = coalition_value(f, x, bg, 0u);
    const double v_full = f(x);
    const long n_proper = (1L << m) - 2;

    Explanation ex;
    ex.method = Method::ShapKernel;
    ex.base_value = v_empty;
    ex.target_score = v_full;

    std::vector<std::pair<unsigned, double>> coalitions;
    std::vector<double> values;

    if (n_samples >= n_proper) {
        // deterministic full-enumeration mode: every proper coalition once,
        // weighted by the Shapley kernel
        for (unsigned mask = 1; mask < full; ++mask) {
            coalitions.emplace_back(mask, shapley_kernel_weight(m, std::popcount(mask)));
            values.push_back(coalition_value(f, x, bg, mask));
        }
        if (!solve_kernel_system(coalitions, values, v_empty, v_full, m, ex.attributions))
            throw DegenerateSampling("kernel SHAP system singular under full enumeration");
        return ex;
    }

    // size distribution proportional to the kernel mass per size
    std::vector<double> size_cdf(m - 1, 0.0);
    double mass = 0.0;
    for (int s = 1; s < m; ++s) {
        mass += static_cast<double>(m - 1) / (s * (m - s));
        size_cdf[s - 1] = mass;
    }
    RngStream rng(derive_seed(seed, "shap.kernel"));
    std::vector<int> pool(m);

    for (int attempt = 0; attempt < 2; ++attempt) {
        coalitions.clear();
        values.clear();
        for (int k = 0; k < n_samples; ++k) {
            const double u = rng.uniform01() * mass;
            int size = 1;
            while (size < m - 1 && u > size_cdf[size - 1]) ++size;
            for (int j = 0; j < m; ++j) pool[j] = j;
            unsigned mask = 0;
            for (int pick = 0; pick < size; ++pick) {
                const std::size_t at = pick + rng.index(m - pick);
                std::swap(pool[pick], pool[at]);
                mask |= 1u << pool[pick];
            }
            coalitions.emplace_back(mask, 1.0);
            values.push_back(coalition_value(f, x, bg, mask));
        }
        if (solve_kernel_system(coalitions, values, v_empty, v_full, m, ex.attributions))
            return ex;
    }
    throw DegenerateSampling("kernel SHAP coalition sampling stayed degenerate after retry");
}

Explanation lime_local(const ScoreFn& f, const std::vector<double>& x, const BackgroundSet& bg,
                       double sigma_perturb, int n_samples, double ridge_gamma,
                       std::uint64_t seed) {
    const int m = static_cast<int>(x.size());
    if (m < 1) throw RejectedInput("empty input");
    if (n_samples < 20) throw RejectedInput("lime needs n_samples >= 20");
    if (sigma_perturb <= 0.0) throw RejectedInput("sigma_perturb must be positive");
    if (ridge_gamma < 0.0) throw RejectedInput("ridge_gamma must be nonnegative");

    const auto bg_mean = bg.feature_means();
    const double base = bg.mean_score(f);
    const double fx = f(x);

    for (int attempt = 0; attempt < 2; ++attempt) {
        const double sigma = sigma_perturb * (attempt == 0 ? 1.0 : 2.0);
        RngStream rng(derive_seed(seed, attempt == 0 ? "lime.samples" : "lime.retry"));
        const int n = m + 1;  // intercept + coefficients
        std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0), b(n, 0.0);
        std::vector<double> p(m), row(n);
        for (int k = 0; k < n_samples; ++k) {
            double sq = 0.0;
            for (int j = 0; j < m; ++j) {
                p[j] = std::clamp(x[j] + sigma * rng.normal(), 0.0, 1.0);
                const double d = p[j] - x[j];
                sq += d * d;
            }
            const double w = std::exp(-sq / (2.0 * sigma * sigma));
            row[0] = 1.0;
            for (int j = 0; j < m; ++j) row[j + 1] = p[j];
            const double y = f(p);
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) a[r * n + c] += w * row[r] * row[c];
                b[r] += w * y * row[r];
            }
        }
        for (int j = 1; j < n; ++j) a[j * n + j] += ridge_gamma;  // intercept unpenalized
        if (solve_linear(a, b, n)) {
            Explanation ex;
            ex.method = Method::Lime;
            ex.base_value = base;
            ex.target_score = fx;
            ex.attributions.assign(m, 0.0);
            for (int j = 0; j < m; ++j) ex.attributions[j] = b[j + 1] * (x[j] - bg_mean[j]);
            return ex;
        }
    }
    throw DegenerateSampling("lime design matrix stayed singular after widening sigma");
}

Explanation permutation_importance(const ScoreFn& f, const std::vector<double>& x,
                                   const BackgroundSet& bg, int n_draws, std::uint64_t seed) {
    const int m = static_cast<int>(x.size());
    if (m < 1) throw RejectedInput("empty input");
    if (n_draws < 10) throw RejectedInput("permutation importance needs n_draws >= 10");

    const double fx = f(x);
    RngStream rng(derive_seed(seed, "permutation.draws"));
    Explanation ex;
    ex.method = Method::Permutation;
    ex.base_value = bg.mean_score(f);
    ex.target_score = fx;
    ex.attributions.assign(m, 0.0);
    std::vector<double> composite = x;
    for (int j = 0; j < m; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n_draws; ++k) {
            const auto& row = bg.rows[rng.index(bg.rows.size())];
            composite[j] = row[j];
            acc += f(composite) - fx;
        }
        composite[j] = x[j];
        ex.attributions[j] = acc / n_draws;
    }
    return ex;
}

Explanation explain(const ScoreFn& f, const std::vector<double>& x, const BackgroundSet& bg,
                    const ExplainerSettings& settings) {
    switch (settings.method) {
        case Method::ShapExact: return shap_exact(f, x, bg);
        case Method::ShapKernel: return shap_kernel(f, x, bg, settings.kernel_samples, settings.seed);
        case Method::Lime:
            return lime_local(f, x, bg, settings.lime_sigma, settings.lime_samples,
                              settings.lime_ridge, settings.seed);
        case Method::Permutation: return permutation_importance(f, x, bg, settings.perm_draws, settings.seed);
    }
    throw RejectedInput("unknown explainer method");
}

void write_explanations_csv(const std::filesystem::path& path,
                            const std::vector<Explanation>& explanations) {
    std::string out = "method,target_score,base_value";
    const std::size_t m = explanations.empty() ? kFeatureCount : explanations.front().attributions.size();
    for (std::size_t j = 1; j <= m; ++j) out += ",s" + std::to_string(j);
    out += "\n";
    for (const auto& ex : explanations) {
        std::vector<std::string> fields{to_string(ex.method), io::format_double(ex.target_score),
                                        io::format_double(ex.base_value)};
        for (double v : ex.attributions) fields.push_back(io::format_double(v));
        out += io::join_csv(fields);
    }
    io::write_text_file(path, out);
}

}  // namespace storm::explain
