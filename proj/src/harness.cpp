#include "storm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "storm/io.hpp"
#include "storm/rng.hpp"

namespace storm::harness {

namespace {

const std::vector<double> kDefaultEpsilons{0.0, 0.02, 0.05, 0.1, 0.15, 0.2};
const std::vector<attacks::AttackKind> kSweepMethods{
    attacks::AttackKind::NoAttack, attacks::AttackKind::FGSM, attacks::AttackKind::BIM,
    attacks::AttackKind::PGD, attacks::AttackKind::Gaussian};

std::vector<attacks::AttackConfig> build_grid(const std::vector<attacks::AttackKind>& methods,
                                              const std::vector<double>& epsilons, int steps,
                                              double alpha_ratio) {
    std::vector<attacks::AttackConfig> grid;
    for (const auto method : methods) {
        for (const double eps : epsilons) {
            attacks::AttackConfig c;
            c.kind = method;
            c.epsilon = eps;
            c.step_alpha = eps * alpha_ratio;
            c.steps = steps;
            grid.push_back(c);
        }
    }
    return grid;
}

// The guard scenarios compare the three Table-style explainers.
const std::vector<explain::Method> kGuardMethods{
    explain::Method::ShapExact, explain::Method::Lime, explain::Method::Permutation};

struct ConfigMap {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const { return kv.count(key) > 0; }
    std::string str(const std::string& key, const std::string& fallback) const {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }
    double num(const std::string& key, double fallback) const {
        const auto it = kv.find(key);
        return it == kv.end() ? fallback : io::parse_double(it->second);
    }
    long integer(const std::string& key, long fallback) const {
        return static_cast<long>(num(key, static_cast<double>(fallback)));
    }
    bool flag(const std::string& key, bool fallback) const {
        const auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw RejectedInput("not a boolean: " + key + "=" + it->second);
    }
    std::vector<std::string> list(const std::string& key,
                                  const std::vector<std::string>& fallback) const {
        const auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        std::vector<std::string> parts;
        std::string cur;
        for (char c : it->second + ",") {
            if (c == ',') {
                if (!cur.empty()) parts.push_back(cur);
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                cur.push_back(c);
            }
        }
        return parts;
    }
};

ConfigMap parse_kv(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw RejectedInput("config line " + std::to_string(line_no) + " is not key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw RejectedInput("empty key on config line " + std::to_string(line_no));
        cfg.kv[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

double window_seconds(const ExperimentConfig& cfg) { return cfg.sim.window_ms / 1000.0; }

sim::SimConfig profile_for(const ExperimentConfig& cfg, bool attacker, int windows,
                           std::string_view seed_label) {
    sim::SimConfig profile = cfg.sim;
    profile.attacker_present = attacker;
    profile.duration_s = windows * window_seconds(cfg);
    profile.seed = derive_seed(cfg.master_seed, seed_label);
    return profile;
}

std::filesystem::path out_path(const ExperimentConfig& cfg, const std::string& name) {
    return std::filesystem::path(cfg.output_dir) / name;
}

explain::ExplainerSettings settings_for(const ExperimentConfig& cfg, explain::Method method,
                                        std::string_view seed_label) {
    explain::ExplainerSettings s = cfg.explainer;
    s.method = method;
    s.seed = derive_seed(cfg.master_seed, seed_label);
    return s;
}

std::string method_tag(explain::Method method) {
    switch (method) {
        case explain::Method::ShapExact: return "shap";
        case explain::Method::ShapKernel: return "shap_kernel";
        case explain::Method::Lime: return "lime";
        case explain::Method::Permutation: return "permutation";
    }
    return "shap";
}

attacks::AttackConfig scenario_bim(const ExperimentConfig& cfg) {
    attacks::AttackConfig bim;
    bim.kind = attacks::AttackKind::BIM;
    bim.epsilon = cfg.scenario_attack_eps;
    bim.step_alpha = cfg.scenario_attack_eps * cfg.alpha_ratio;
    bim.steps = cfg.attack_steps;
    bim.seed = derive_seed(cfg.master_seed, "scenario.attack");
    return bim;
}

}  // namespace

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    // Benchmark traffic: a diurnal-style load swing whose peaks push the gNB
    // into genuine congestion, so normal data spans the quiet-to-overloaded
    // corridor the detector must generalize over.
    cfg.sim.window_ms = 500;
    cfg.sim.n_resources = 16;
    cfg.sim.reservation_hold_s = 2.7;
    cfg.sim.benign_ue_count = 12;
    cfg.sim.benign_request_rate_hz = 3.5;
    cfg.sim.benign_load_modulation = 0.9;
    cfg.sim.benign_load_period_s = 20.0;
    cfg.sim.attack_rate_hz = 132.0;
    cfg.sim.overload_threshold_hz = 90.0;
    cfg.sim.duration_s = 200.0;
    cfg.train.learning_rate = 0.01;
    cfg.train.epochs = 4000;
    cfg.train.batch_size = 32;
    cfg.train.init_scale = 1.0;
    cfg.attack_grid = build_grid(kSweepMethods, kDefaultEpsilons, cfg.attack_steps, cfg.alpha_ratio);
    return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
    const ConfigMap map = parse_kv(text);
    ExperimentConfig cfg = default_config();

    cfg.sim.duration_s = map.num("sim.duration_s", cfg.sim.duration_s);
    cfg.sim.window_ms = static_cast<int>(map.integer("sim.window_ms", cfg.sim.window_ms));
    cfg.sim.n_resources = static_cast<int>(map.integer("sim.n_resources", cfg.sim.n_resources));
    cfg.sim.reservation_hold_s = map.num("sim.reservation_hold_s", cfg.sim.reservation_hold_s);
    cfg.sim.benign_ue_count =
        static_cast<int>(map.integer("sim.benign_ue_count", cfg.sim.benign_ue_count));
    cfg.sim.benign_request_rate_hz =
        map.num("sim.benign_request_rate_hz", cfg.sim.benign_request_rate_hz);
    cfg.sim.benign_load_modulation =
        map.num("sim.benign_load_modulation", cfg.sim.benign_load_modulation);
    cfg.sim.benign_load_period_s =
        map.num("sim.benign_load_period_s", cfg.sim.benign_load_period_s);
    cfg.sim.attacker_present = map.flag("sim.attacker_present", cfg.sim.attacker_present);
    cfg.sim.attack_rate_hz = map.num("sim.attack_rate_hz", cfg.sim.attack_rate_hz);
    cfg.sim.overload_threshold_hz =
        map.num("sim.overload_threshold_hz", cfg.sim.overload_threshold_hz);

    cfg.train.learning_rate = map.num("train.learning_rate", cfg.train.learning_rate);
    cfg.train.epochs = static_cast<int>(map.integer("train.epochs", cfg.train.epochs));
    cfg.train.batch_size = static_cast<int>(map.integer("train.batch_size", cfg.train.batch_size));
    cfg.train.init_scale = map.num("train.init_scale", cfg.train.init_scale);

    cfg.attack_steps = static_cast<int>(map.integer("attack.steps", cfg.attack_steps));
    cfg.alpha_ratio = map.num("attack.alpha_ratio", cfg.alpha_ratio);
    std::vector<attacks::AttackKind> methods = kSweepMethods;
    if (map.has("attack.methods")) {
        methods.clear();
        methods.push_back(attacks::AttackKind::NoAttack);
        for (const auto& name : map.list("attack.methods", {}))
            methods.push_back(attacks::attack_kind_from_string(name));
    }
    std::vector<double> epsilons = kDefaultEpsilons;
    if (map.has("attack.epsilons")) {
        epsilons.clear();
        for (const auto& v : map.list("attack.epsilons", {})) epsilons.push_back(io::parse_double(v));
    }
    cfg.attack_grid = build_grid(methods, epsilons, cfg.attack_steps, cfg.alpha_ratio);

    cfg.guard.lambda = map.num("guard.lambda", cfg.guard.lambda);
    cfg.guard.sigma_floor = map.num("guard.sigma_floor", cfg.guard.sigma_floor);
    cfg.guard.mode = guard::mode_from_string(map.str("guard.mode", to_string(cfg.guard.mode)));
    cfg.guard.kde_density_quantile =
        map.num("guard.kde_density_quantile", cfg.guard.kde_density_quantile);

    if (map.has("explainer.method")) {
        cfg.explainer_choice = explain::method_from_string(map.str("explainer.method", ""));
        cfg.explainer.method = *cfg.explainer_choice;
    }
    cfg.explainer.kernel_samples =
        static_cast<int>(map.integer("explainer.kernel_samples", cfg.explainer.kernel_samples));
    cfg.explainer.lime_sigma = map.num("explainer.lime_sigma", cfg.explainer.lime_sigma);
    cfg.explainer.lime_samples =
        static_cast<int>(map.integer("explainer.lime_samples", cfg.explainer.lime_samples));
    cfg.explainer.lime_ridge = map.num("explainer.lime_ridge", cfg.explainer.lime_ridge);
    cfg.explainer.perm_draws =
        static_cast<int>(map.integer("explainer.perm_draws", cfg.explainer.perm_draws));
    cfg.background_size =
        static_cast<std::size_t>(map.integer("explainer.background_size",
                                             static_cast<long>(cfg.background_size)));

    if (map.has("experiment.master_seed"))
        cfg.master_seed = std::stoull(map.str("experiment.master_seed", "42"));
    cfg.output_dir = map.str("experiment.output_dir", cfg.output_dir);
    cfg.train_windows = static_cast<int>(map.integer("experiment.train_windows", cfg.train_windows));
    cfg.holdout_normal_windows = static_cast<int>(
        map.integer("experiment.holdout_normal_windows", cfg.holdout_normal_windows));
    cfg.holdout_attack_windows = static_cast<int>(
        map.integer("experiment.holdout_attack_windows", cfg.holdout_attack_windows));
    cfg.attack_warmup_windows = static_cast<int>(
        map.integer("experiment.attack_warmup_windows", cfg.attack_warmup_windows));
    cfg.scenario_attack_eps = map.num("experiment.scenario_attack_eps", cfg.scenario_attack_eps);
    cfg.ids_z = map.num("experiment.ids_z", cfg.ids_z);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(io::read_text_file(path));
}

Benchmark build_benchmark(const ExperimentConfig& cfg) {
    Benchmark bench;
    bench.train_set =
        sim::generate_dataset({profile_for(cfg, false, cfg.train_windows, "sim.train")},
                              cfg.train_windows);

    const auto holdout_normal_profile =
        profile_for(cfg, false, cfg.holdout_normal_windows, "sim.holdout.normal");
    bench.holdout_normal.rows =
        sim::extract_features(sim::simulate(holdout_normal_profile), holdout_normal_profile);
    bench.holdout_normal.provenance = sim::config_digest(holdout_normal_profile);

    // the storm holdout is steady state: the pool-exhaustion onset is warmup.
    // One malicious UE, no benign UEs during the storm.
    auto storm_profile = profile_for(
        cfg, true, cfg.holdout_attack_windows + cfg.attack_warmup_windows, "sim.holdout.attack");
    storm_profile.benign_ue_count = 0;
    auto storm_rows = sim::extract_features(sim::simulate(storm_profile), storm_profile);
    const std::size_t warmup =
        std::min(storm_rows.size(), static_cast<std::size_t>(std::max(0, cfg.attack_warmup_windows)));
    storm_rows.erase(storm_rows.begin(), storm_rows.begin() + static_cast<std::ptrdiff_t>(warmup));
    bench.holdout_attack.rows = std::move(storm_rows);
    bench.holdout_attack.provenance = sim::config_digest(storm_profile);

    net::TrainConfig train = cfg.train;
    train.seed = derive_seed(cfg.master_seed, "ids.train");
    bench.model = ids::train_ids(bench.train_set.rows, train, cfg.ids_z);

    auto scale_rows = [&bench](const std::vector<sim::WindowFeatures>& rows) {
        std::vector<std::vector<double>> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(bench.model.scaler.transform(row.features()));
        return out;
    };
    bench.train_scaled = scale_rows(bench.train_set.rows);
    bench.holdout_normal_scaled = scale_rows(bench.holdout_normal.rows);
    bench.holdout_attack_scaled = scale_rows(bench.holdout_attack.rows);
    bench.background = explain::BackgroundSet::subsample(
        bench.train_scaled, cfg.background_size, derive_seed(cfg.master_seed, "background"));
    return bench;
}

void write_benchmark_artifacts(const ExperimentConfig& cfg, const Benchmark& bench) {
    sim::write_dataset_csv(out_path(cfg, "dataset_train.csv"), bench.train_set);
    sim::write_dataset_csv(out_path(cfg, "dataset_holdout_normal.csv"), bench.holdout_normal);
    sim::write_dataset_csv(out_path(cfg, "dataset_holdout_attack.csv"), bench.holdout_attack);
    io::write_text_file(out_path(cfg, "ids_model.json"), ids::ids_to_json(bench.model).dump(2) + "\n");
}

std::vector<MetricsReport> run_scenario_degradation(const ExperimentConfig& cfg,
                                                    const Benchmark& bench) {
    if (cfg.attack_grid.empty()) throw RejectedInput("attack grid is empty");

    std::vector<Decision> truth;
    truth.insert(truth.end(), bench.holdout_attack_scaled.size(), Decision::Attack);
    truth.insert(truth.end(), bench.holdout_normal_scaled.size(), Decision::Normal);

    std::vector<Decision> normal_preds;
    normal_preds.reserve(bench.holdout_normal_scaled.size());
    for (const auto& row : bench.holdout_normal_scaled)
        normal_preds.push_back(bench.model.classify_scaled(row).predicted);

    std::vector<MetricsReport> reports;
    for (const auto& grid_cell : cfg.attack_grid) {
        attacks::AttackConfig cell = grid_cell;
        cell.seed = derive_seed(cfg.master_seed, "scenario1.attack",
                                static_cast<std::uint64_t>(reports.size()));
        const auto batch = attacks::attack_batch(bench.model, bench.holdout_attack.rows, cell);
        std::vector<Decision> preds;
        preds.reserve(truth.size());
        for (const auto& row : batch.perturbed)
            preds.push_back(bench.model.classify_scaled(row).predicted);
        preds.insert(preds.end(), normal_preds.begin(), normal_preds.end());
        MetricsReport r = compute_metrics(preds, truth, Decision::Attack);
        r.scenario = "scenario1";
        r.method = attacks::to_string(cell.kind);
        r.epsilon = cell.epsilon;
        reports.push_back(r);
    }

    write_metrics_csv(out_path(cfg, "scenario1_metrics.csv"), reports);

    // accuracy-vs-epsilon lines, one series per method
    std::vector<double> eps_axis;
    std::vector<io::Series> series;
    for (const auto& r : reports) {
        if (series.empty() || series.back().name != r.method) series.push_back({r.method, {}});
        series.back().y.push_back(r.accuracy);
        if (series.size() == 1) eps_axis.push_back(r.epsilon);
    }
    io::write_text_file(out_path(cfg, "scenario1_accuracy.svg"),
                        io::render_line_chart("Detector accuracy under evasion attacks", "epsilon",
                                              "accuracy", eps_axis, series));
    return reports;
}

namespace {

struct GuardRun {
    guard::ShapProfile profile;
    std::vector<guard::GuardVerdict> verdicts;  // over mixed rows
    std::vector<explain::Explanation> explanations;
};

// Fits one profile and checks every mixed row with per-row derived seeds.
GuardRun run_guard(const ExperimentConfig& cfg, const Benchmark& bench, explain::Method method,
                   const std::vector<std::vector<double>>& mixed_rows) {
    GuardRun run;
    const auto fit_settings =
        settings_for(cfg, method, "guard.fit." + method_tag(method));
    run.profile = guard::fit_profile(bench.train_scaled, bench.model, fit_settings,
                                     bench.background, cfg.guard);
    const explain::ScoreFn score = [&bench](const std::vector<double>& x) {
        return bench.model.score_scaled(x);
    };
    const auto check_base = settings_for(cfg, method, "guard.check." + method_tag(method));
    run.verdicts.reserve(mixed_rows.size());
    run.explanations.reserve(mixed_rows.size());
    for (std::size_t i = 0; i < mixed_rows.size(); ++i) {
        explain::ExplainerSettings row_settings = check_base;
        row_settings.seed = derive_seed(check_base.seed, "row", i);
        run.explanations.push_back(explain::explain(score, mixed_rows[i], bench.background,
                                                    row_settings));
        run.verdicts.push_back(guard::check(run.profile, run.explanations.back(), cfg.guard));
    }
    return run;
}

}  // namespace

std::vector<MetricsReport> run_scenario_detection(const ExperimentConfig& cfg,
                                                  const Benchmark& bench) {
    const auto batch =
        attacks::attack_batch(bench.model, bench.holdout_attack.rows, scenario_bim(cfg));
    attacks::write_batch_csv(out_path(cfg, "scenario2_adversarial_bim.csv"), batch);

    // positives are adversarially manipulated inputs
    std::vector<std::vector<double>> mixed = batch.perturbed;
    mixed.insert(mixed.end(), bench.holdout_normal_scaled.begin(),
                 bench.holdout_normal_scaled.end());
    std::vector<int> truth(batch.perturbed.size(), 1);
    truth.insert(truth.end(), bench.holdout_normal_scaled.size(), 0);

    std::vector<MetricsReport> reports;
    for (const auto method : kGuardMethods) {
        const GuardRun run = run_guard(cfg, bench, method, mixed);
        std::vector<int> preds;
        preds.reserve(mixed.size());
        for (const auto& v : run.verdicts) preds.push_back(v.decision == Decision::Attack ? 1 : 0);
        MetricsReport r = compute_metrics(preds, truth, 1);
        r.scenario = "scenario2";
        r.method = method_tag(method);
        r.epsilon = cfg.scenario_attack_eps;
        reports.push_back(r);

        const std::string tag = method_tag(method);
        io::write_text_file(out_path(cfg, "guard_profile_" + tag + ".json"),
                            guard::profile_to_json(run.profile).dump(2) + "\n");
        guard::write_verdicts_csv(out_path(cfg, "scenario2_verdicts_" + tag + ".csv"),
                                  run.verdicts);
        explain::write_explanations_csv(out_path(cfg, "scenario2_explanations_" + tag + ".csv"),
                                        run.explanations);
    }

    // detector-only baseline: no guard, so nothing is ever flagged as
    // manipulated (zero precision/recall by construction)
    std::vector<int> none(mixed.size(), 0);
    MetricsReport ae = compute_metrics(none, truth, 1);
    ae.scenario = "scenario2";
    ae.method = "ae_only";
    ae.epsilon = cfg.scenario_attack_eps;
    reports.push_back(ae);

    write_metrics_csv(out_path(cfg, "scenario2_metrics.csv"), reports);
    return reports;
}

std::vector<MetricsReport> run_scenario_mitigation(const ExperimentConfig& cfg,
                                                   const Benchmark& bench) {
    const auto batch =
        attacks::attack_batch(bench.model, bench.holdout_attack.rows, scenario_bim(cfg));

    std::vector<std::vector<double>> mixed = batch.perturbed;
    mixed.insert(mixed.end(), bench.holdout_normal_scaled.begin(),
                 bench.holdout_normal_scaled.end());
    std::vector<Decision> truth(batch.perturbed.size(), Decision::Attack);
    truth.insert(truth.end(), bench.holdout_normal_scaled.size(), Decision::Normal);

    std::vector<ids::IdsVerdict> ids_verdicts;
    ids_verdicts.reserve(mixed.size());
    std::vector<Decision> unmitigated;
    unmitigated.reserve(mixed.size());
    for (const auto& row : mixed) {
        ids_verdicts.push_back(bench.model.classify_scaled(row));
        unmitigated.push_back(ids_verdicts.back().predicted);
    }

    std::vector<MetricsReport> reports;
    MetricsReport base = compute_metrics(unmitigated, truth, Decision::Attack);
    base.scenario = "scenario3";
    base.method = "unmitigated";
    base.epsilon = cfg.scenario_attack_eps;
    reports.push_back(base);

    for (const auto method : kGuardMethods) {
        const GuardRun run = run_guard(cfg, bench, method, mixed);
        std::vector<Decision> finals;
        finals.reserve(mixed.size());
        for (std::size_t i = 0; i < mixed.size(); ++i)
            finals.push_back(guard::mitigate(ids_verdicts[i], run.verdicts[i]));
        MetricsReport r = compute_metrics(finals, truth, Decision::Attack);
        r.scenario = "scenario3";
        r.method = method_tag(method);
        r.epsilon = cfg.scenario_attack_eps;
        reports.push_back(r);
    }

    write_metrics_csv(out_path(cfg, "scenario3_metrics.csv"), reports);

    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& r : reports) {
        labels.push_back(r.method);
        values.push_back(r.accuracy);
    }
    io::write_text_file(out_path(cfg, "scenario3_accuracy.svg"),
                        io::render_bar_chart("Final-label accuracy with zero-touch mitigation",
                                             "accuracy", labels, values));
    return reports;
}

std::vector<MetricsReport> run_scenario_degradation(const ExperimentConfig& cfg) {
    const Benchmark bench = build_benchmark(cfg);
    write_benchmark_artifacts(cfg, bench);
    return run_scenario_degradation(cfg, bench);
}

std::vector<MetricsReport> run_scenario_detection(const ExperimentConfig& cfg) {
    const Benchmark bench = build_benchmark(cfg);
    write_benchmark_artifacts(cfg, bench);
    return run_scenario_detection(cfg, bench);
}

std::vector<MetricsReport> run_scenario_mitigation(const ExperimentConfig& cfg) {
    const Benchmark bench = build_benchmark(cfg);
    write_benchmark_artifacts(cfg, bench);
    return run_scenario_mitigation(cfg, bench);
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricsReport>& reports) {
    std::string out = "scenario,method,epsilon,tp,fp,tn,fn,accuracy,precision,recall,f1\n";
    for (const auto& r : reports) {
        out += io::join_csv({r.scenario, r.method, io::format_double(r.epsilon),
                             std::to_string(r.tp), std::to_string(r.fp), std::to_string(r.tn),
                             std::to_string(r.fn), io::format_double(r.accuracy),
                             io::format_double(r.precision), io::format_double(r.recall),
                             io::format_double(r.f1)});
    }
    io::write_text_file(path, out);
}

std::vector<MetricsReport> read_metrics_csv(const std::filesystem::path& path) {
    std::vector<MetricsReport> reports;
    std::istringstream in(io::read_text_file(path));
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto f = io::split_csv_line(line);
        if (f.size() != 11) throw RejectedInput("metrics row must have 11 fields");
        MetricsReport r;
        r.scenario = f[0];
        r.method = f[1];
        r.epsilon = io::parse_double(f[2]);
        r.tp = std::stol(f[3]);
        r.fp = std::stol(f[4]);
        r.tn = std::stol(f[5]);
        r.fn = std::stol(f[6]);
        r.accuracy = io::parse_double(f[7]);
        r.precision = io::parse_double(f[8]);
        r.recall = io::parse_double(f[9]);
        r.f1 = io::parse_double(f[10]);
        reports.push_back(r);
    }
    return reports;
}

std::string format_report_table(const std::vector<MetricsReport>& reports) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %-12s %8s %6s %6s %6s %6s %9s %10s %8s %8s\n",
                  "scenario", "method", "eps", "tp", "fp", "tn", "fn", "accuracy", "precision",
                  "recall", "f1");
    out << buf;
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf),
                      "%-10s %-12s %8.3g %6ld %6ld %6ld %6ld %9.4f %10.4f %8.4f %8.4f\n",
                      r.scenario.c_str(), r.method.c_str(), r.epsilon, r.tp, r.fp, r.tn, r.fn,
                      r.accuracy, r.precision, r.recall, r.f1);
        out << buf;
    }
    return out.str();
}

}  // namespace storm::harness
