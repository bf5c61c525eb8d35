// Command-line harness around the storm library: dataset generation,
// detector training, evasion attacks, explanations, guard profiles and the
// three benchmark scenarios.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "storm/attacks.hpp"
#include "storm/explain.hpp"
#include "storm/guard.hpp"
#include "storm/harness.hpp"
#include "storm/ids.hpp"
#include "storm/io.hpp"
#include "storm/rng.hpp"
#include "storm/sim.hpp"

namespace {

using namespace storm;

struct GlobalOpts {
    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
};

harness::ExperimentConfig resolve_config(const GlobalOpts& opts) {
    harness::ExperimentConfig cfg = opts.config_path.empty()
                                        ? harness::default_config()
                                        : harness::load_config(opts.config_path);
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (!opts.output_dir.empty()) cfg.output_dir = opts.output_dir;
    return cfg;
}

std::filesystem::path joined(const std::string& dir, const std::string& name) {
    return std::filesystem::path(dir) / name;
}

void print_reports(const std::vector<harness::MetricsReport>& reports, const std::string& format) {
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : reports) {
            j.push_back({{"scenario", r.scenario}, {"method", r.method}, {"epsilon", r.epsilon},
                         {"tp", r.tp}, {"fp", r.fp}, {"tn", r.tn}, {"fn", r.fn},
                         {"accuracy", r.accuracy}, {"precision", r.precision},
                         {"recall", r.recall}, {"f1", r.f1}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << harness::format_report_table(reports);
    }
}

int cmd_simulate(const GlobalOpts& opts, bool with_attacker, const std::string& out_name) {
    harness::ExperimentConfig cfg = resolve_config(opts);
    sim::SimConfig profile = cfg.sim;
    profile.attacker_present = profile.attacker_present || with_attacker;
    profile.seed = derive_seed(cfg.master_seed, "cli.simulate");
    const int windows = static_cast<int>(profile.duration_s * 1000.0 / profile.window_ms);
    sim::LabeledDataset dataset;
    if (profile.attacker_present) {
        // no Normal rows, so no scaler stats in the sidecar
        dataset.rows = sim::extract_features(sim::simulate(profile), profile);
        dataset.provenance = sim::config_digest(profile);
    } else {
        dataset = sim::generate_dataset({profile}, windows);
    }
    const auto path = joined(cfg.output_dir, out_name);
    sim::write_dataset_csv(path, dataset);
    std::cout << "wrote " << dataset.rows.size() << " windows to " << path.string() << "\n";
    return 0;
}

int cmd_train(const GlobalOpts& opts, const std::string& data_path) {
    harness::ExperimentConfig cfg = resolve_config(opts);
    std::vector<sim::WindowFeatures> rows;
    if (!data_path.empty()) {
        rows = sim::read_dataset_csv(data_path).rows;
    } else {
        sim::SimConfig profile = cfg.sim;
        profile.attacker_present = false;
        profile.duration_s = cfg.train_windows * (cfg.sim.window_ms / 1000.0);
        profile.seed = derive_seed(cfg.master_seed, "sim.train");
        rows = sim::extract_features(sim::simulate(profile), profile);
    }
    std::erase_if(rows, [](const sim::WindowFeatures& r) { return r.label != sim::Label::Normal; });
    net::TrainConfig train = cfg.train;
    train.seed = derive_seed(cfg.master_seed, "ids.train");
    const auto model = ids::train_ids(rows, train, cfg.ids_z);
    const auto path = joined(cfg.output_dir, "ids_model.json");
    io::write_text_file(path, ids::ids_to_json(model).dump(2) + "\n");
    std::cout << "trained on " << rows.size() << " normal windows, tau="
              << io::format_double(model.threshold_tau) << ", model at " << path.string() << "\n";
    return 0;
}

ids::IdsModel load_model(const std::string& model_path) {
    return ids::ids_from_json(nlohmann::json::parse(io::read_text_file(model_path)));
}

int cmd_score(const GlobalOpts& opts, const std::string& model_path, const std::string& data_path) {
    const auto model = load_model(model_path);
    const auto rows = sim::read_dataset_csv(data_path).rows;
    std::string out = "window_start_s,score_d,predicted,label\n";
    long attacks_found = 0;
    for (const auto& row : rows) {
        const auto verdict = model.classify(row.features());
        if (verdict.predicted == Decision::Attack) ++attacks_found;
        out += io::join_csv({io::format_double(row.window_start_s),
                             io::format_double(verdict.score_d), to_string(verdict.predicted),
                             sim::to_string(row.label)});
    }
    harness::ExperimentConfig cfg = resolve_config(opts);
    const auto path = joined(cfg.output_dir, "scores.csv");
    io::write_text_file(path, out);
    std::cout << attacks_found << "/" << rows.size() << " windows flagged; scores at "
              << path.string() << "\n";
    return 0;
}

int cmd_attack(const GlobalOpts& opts, const std::string& model_path, const std::string& data_path,
               const std::string& method, double eps) {
    harness::ExperimentConfig cfg = resolve_config(opts);
    const auto model = load_model(model_path);
    auto rows = sim::read_dataset_csv(data_path).rows;
    std::erase_if(rows, [](const sim::WindowFeatures& r) { return r.label != sim::Label::Attack; });
    attacks::AttackConfig attack;
    attack.kind = attacks::attack_kind_from_string(method);
    attack.epsilon = eps;
    attack.step_alpha = eps * cfg.alpha_ratio;
    attack.steps = cfg.attack_steps;
    attack.seed = derive_seed(cfg.master_seed, "cli.attack");
    const auto batch = attacks::attack_batch(model, rows, attack);
    const auto path = joined(cfg.output_dir, "adversarial_" + method + ".csv");
    attacks::write_batch_csv(path, batch);
    std::cout << "perturbed " << batch.perturbed.size() << " storm windows with " << method
              << " eps=" << io::format_double(eps) << "; batch at " << path.string() << "\n";
    return 0;
}

explain::BackgroundSet background_from(const harness::ExperimentConfig& cfg,
                                       const ids::IdsModel& model, const std::string& data_path) {
    auto rows = sim::read_dataset_csv(data_path).rows;
    std::erase_if(rows, [](const sim::WindowFeatures& r) { return r.label != sim::Label::Normal; });
    if (rows.empty()) throw CalibrationImpossible("background data has no Normal rows");
    std::vector<std::vector<double>> scaled;
    scaled.reserve(rows.size());
    for (const auto& row : rows) scaled.push_back(model.scaler.transform(row.features()));
    return explain::BackgroundSet::subsample(scaled, cfg.background_size,
                                             derive_seed(cfg.master_seed, "background"));
}

int cmd_explain(const GlobalOpts& opts, const std::string& model_path,
                const std::string& data_path, const std::string& bg_path,
                const std::string& method) {
    harness::ExperimentConfig cfg = resolve_config(opts);
    const auto model = load_model(model_path);
    const auto bg = background_from(cfg, model, bg_path.empty() ? data_path : bg_path);
    const auto rows = sim::read_dataset_csv(data_path).rows;
    explain::ExplainerSettings settings = cfg.explainer;
    settings.method = explain::method_from_string(method);
    const explain::ScoreFn score = [&model](const std::vector<double>& x) {
        return model.score_scaled(x);
    };
    std::vector<explain::Explanation> explanations;
    explanations.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        settings.seed = derive_seed(cfg.master_seed, "cli.explain", i);
        explanations.push_back(
            explain::explain(score, model.scaler.transform(rows[i].features()), bg, settings));
    }
    const auto path = joined(cfg.output_dir, "explanations_" + method + ".csv");
    explain::write_explanations_csv(path, explanations);
    std::cout << "explained " << explanations.size() << " rows with " << method << "; output at "
              << path.string() << "\n";
    return 0;
}

int cmd_guard_fit(const GlobalOpts& opts, const std::string& model_path,
                  const std::string& data_path, const std::string& method) {
    harness::ExperimentConfig cfg = resolve_config(opts);
    const auto model = load_model(model_path);
    auto rows = sim::read_dataset_csv(data_path).rows;
    std::erase_if(rows, [](const sim::WindowFeatures& r) { return r.label != sim::Label::Normal; });
    std::vector<std::vector<double>> scaled;
    scaled.reserve(rows.size());
    for (const auto& row : rows) scaled.push_back(model.scaler.transform(row.features()));
    const auto bg = explain::BackgroundSet::subsample(scaled, cfg.background_size,
                                                      derive_seed(cfg.master_seed, "background"));
    explain::ExplainerSettings settings = cfg.explainer;
    settings.method = explain::method_from_string(method);
    settings.seed = derive_seed(cfg.master_seed, "guard.fit." + method);
    const auto profile = guard::fit_profile(scaled, model, settings, bg, cfg.guard);
    const auto path = joined(cfg.output_dir, "guard_profile_" + method + ".json");
    io::write_text_file(path, guard::profile_to_json(profile).dump(2) + "\n");
    std::cout << "fitted guard profile on " << profile.n_fit << " rows; profile at "
              << path.string() << "\n";
    return 0;
}

int cmd_guard_check(const GlobalOpts& opts, const std::string& model_path,
                    const std::string& profile_path, const std::string& data_path,
                    const std::string& bg_path) {
    harness::ExperimentConfig cfg = resolve_config(opts);
    const auto model = load_model(model_path);
    const auto profile = guard::profile_from_json(
        nlohmann::json::parse(io::read_text_file(profile_path)));
    const auto bg = background_from(cfg, model, bg_path);
    const auto rows = sim::read_dataset_csv(data_path).rows;
    explain::ExplainerSettings settings = cfg.explainer;
    settings.method = profile.explainer_method;
    const explain::ScoreFn score = [&model](const std::vector<double>& x) {
        return model.score_scaled(x);
    };
    std::vector<guard::GuardVerdict> verdicts;
    long flagged = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        settings.seed = derive_seed(cfg.master_seed, "guard.check", i);
        const auto ex =
            explain::explain(score, model.scaler.transform(rows[i].features()), bg, settings);
        verdicts.push_back(guard::check(profile, ex, cfg.guard));
        if (verdicts.back().decision == Decision::Attack) ++flagged;
    }
    const auto path = joined(cfg.output_dir, "guard_verdicts.csv");
    guard::write_verdicts_csv(path, verdicts);
    std::cout << flagged << "/" << verdicts.size() << " rows flagged; verdicts at " << path.string()
              << "\n";
    return 0;
}

int cmd_scenario(const GlobalOpts& opts, int which) {
    harness::ExperimentConfig cfg = resolve_config(opts);
    const auto bench = harness::build_benchmark(cfg);
    harness::write_benchmark_artifacts(cfg, bench);
    std::vector<harness::MetricsReport> reports;
    if (which == 1) reports = harness::run_scenario_degradation(cfg, bench);
    if (which == 2) reports = harness::run_scenario_detection(cfg, bench);
    if (which == 3) reports = harness::run_scenario_mitigation(cfg, bench);
    print_reports(reports, opts.format);
    return 0;
}

int cmd_report(const GlobalOpts& opts) {
    harness::ExperimentConfig cfg = resolve_config(opts);
    std::vector<harness::MetricsReport> all;
    for (const char* name :
         {"scenario1_metrics.csv", "scenario2_metrics.csv", "scenario3_metrics.csv"}) {
        const auto path = joined(cfg.output_dir, name);
        if (!std::filesystem::exists(path)) continue;
        const auto reports = harness::read_metrics_csv(path);
        all.insert(all.end(), reports.begin(), reports.end());
    }
    if (all.empty()) {
        std::cerr << "error: rejected-input: no scenario metrics found under " << cfg.output_dir
                  << "\n";
        return 2;
    }
    print_reports(all, opts.format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"autoencoder IDS for RRC signaling storms with an attribution-envelope guard"};
    app.require_subcommand(1);

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "experiment config file")->check(CLI::ExistingFile);
    app.add_option("--seed", opts.seed, "master seed override");
    app.add_option("--out", opts.output_dir, "output directory override");
    app.add_option("--format", opts.format, "report format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* sim_cmd = app.add_subcommand("simulate", "generate a labeled window dataset");
    bool with_attacker = false;
    std::string sim_out_name = "dataset.csv";
    sim_cmd->add_flag("--attacker", with_attacker, "include the malicious UE");
    sim_cmd->add_option("--name", sim_out_name, "output csv name");

    auto* train_cmd = app.add_subcommand("train", "train the detector on normal windows");
    std::string train_data;
    train_cmd->add_option("--data", train_data, "dataset csv (defaults to a fresh simulation)");

    auto* score_cmd = app.add_subcommand("score", "score windows with a trained detector");
    std::string score_model, score_data;
    score_cmd->add_option("--model", score_model, "ids model json")->required();
    score_cmd->add_option("--data", score_data, "dataset csv")->required();

    auto* attack_cmd = app.add_subcommand("attack", "craft evasion examples for storm windows");
    std::string attack_model, attack_data, attack_method = "fgsm";
    double attack_eps = 0.1;
    attack_cmd->add_option("--model", attack_model, "ids model json")->required();
    attack_cmd->add_option("--data", attack_data, "dataset csv")->required();
    attack_cmd->add_option("--method", attack_method, "fgsm|bim|pgd|gaussian|none");
    attack_cmd->add_option("--eps", attack_eps, "perturbation budget in scaled space");

    auto* explain_cmd = app.add_subcommand("explain", "attribute anomaly scores per feature");
    std::string ex_model, ex_data, ex_bg, ex_method = "shap_exact";
    explain_cmd->add_option("--model", ex_model, "ids model json")->required();
    explain_cmd->add_option("--data", ex_data, "dataset csv")->required();
    explain_cmd->add_option("--background", ex_bg, "normal dataset csv for the background");
    explain_cmd->add_option("--method", ex_method, "shap_exact|shap_kernel|lime|permutation");

    auto* fit_cmd = app.add_subcommand("guard-fit", "fit the attribution envelope profile");
    std::string fit_model, fit_data, fit_method = "shap_exact";
    fit_cmd->add_option("--model", fit_model, "ids model json")->required();
    fit_cmd->add_option("--data", fit_data, "normal dataset csv")->required();
    fit_cmd->add_option("--method", fit_method, "shap_exact|shap_kernel|lime|permutation");

    auto* check_cmd = app.add_subcommand("guard-check", "check windows against a fitted profile");
    std::string check_model, check_profile, check_data, check_bg;
    check_cmd->add_option("--model", check_model, "ids model json")->required();
    check_cmd->add_option("--profile", check_profile, "guard profile json")->required();
    check_cmd->add_option("--data", check_data, "dataset csv to check")->required();
    check_cmd->add_option("--background", check_bg, "normal dataset csv for the background")
        ->required();

    auto* s1 = app.add_subcommand("scenario1", "baseline + degradation sweep");
    auto* s2 = app.add_subcommand("scenario2", "guard detection comparison");
    auto* s3 = app.add_subcommand("scenario3", "zero-touch mitigation comparison");
    auto* report_cmd = app.add_subcommand("report", "summarize scenario metrics in an output dir");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed()) return cmd_simulate(opts, with_attacker, sim_out_name);
        if (train_cmd->parsed()) return cmd_train(opts, train_data);
        if (score_cmd->parsed()) return cmd_score(opts, score_model, score_data);
        if (attack_cmd->parsed())
            return cmd_attack(opts, attack_model, attack_data, attack_method, attack_eps);
        if (explain_cmd->parsed()) return cmd_explain(opts, ex_model, ex_data, ex_bg, ex_method);
        if (fit_cmd->parsed()) return cmd_guard_fit(opts, fit_model, fit_data, fit_method);
        if (check_cmd->parsed())
            return cmd_guard_check(opts, check_model, check_profile, check_data, check_bg);
        if (s1->parsed()) return cmd_scenario(opts, 1);
        if (s2->parsed()) return cmd_scenario(opts, 2);
        if (s3->parsed()) return cmd_scenario(opts, 3);
        if (report_cmd->parsed()) return cmd_report(opts);
    } catch (const storm::RejectedInput& e) {
        std::cerr << "error: rejected-input: " << e.what() << "\n";
        return 2;
    } catch (const storm::InsufficientData& e) {
        std::cerr << "error: insufficient-data: " << e.what() << "\n";
        return 2;
    } catch (const storm::CalibrationImpossible& e) {
        std::cerr << "error: calibration-impossible: " << e.what() << "\n";
        return 2;
    } catch (const storm::TrainingDiverged& e) {
        std::cerr << "error: training-diverged: " << e.what() << "\n";
        return 3;
    } catch (const storm::DegenerateSampling& e) {
        std::cerr << "error: degenerate-sampling: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
