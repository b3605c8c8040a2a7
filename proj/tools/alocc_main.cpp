#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "alocc/checkpoint.hpp"
#include "alocc/config_io.hpp"
#include "alocc/csv.hpp"
#include "alocc/detect.hpp"
#include "alocc/metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct DataSpec {
    std::string kind;         // "mnist_idx" | "image_dir"
    std::string images;       // mnist_idx
    std::string labels;       // mnist_idx
    std::string path;         // image_dir: target-class images
    std::string outlier_path; // image_dir: outlier pool for eval (optional)
    int size = 32;
};

struct ExperimentConfig {
    DataSpec data;
    int target_class = 1;
    int train_count = 0;       // 0 = all target samples
    int eval_inlier_count = 0; // 0 = every held-out target sample
    std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5};
    int base_width = 64;
    alocc::TrainConfig train;
    alocc::DetectionConfig detection;
    std::optional<double> config_tau; // set when the config carries detection.tau
    std::string out_dir = "out";
};

void require_exists(const std::string& path, const char* what) {
    if (!fs::exists(path))
        throw alocc::ConfigError(std::string(what) + " does not exist: " + path);
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw alocc::ConfigError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw alocc::ConfigError("config is not valid JSON: " + std::string(e.what()));
    }

    ExperimentConfig cfg;
    try {
        const json& jd = j.at("data");
        cfg.data.kind = jd.at("kind").get<std::string>();
        if (cfg.data.kind == "mnist_idx") {
            cfg.data.images = jd.at("images").get<std::string>();
            cfg.data.labels = jd.at("labels").get<std::string>();
            require_exists(cfg.data.images, "images file");
            require_exists(cfg.data.labels, "labels file");
        } else if (cfg.data.kind == "image_dir") {
            cfg.data.path = jd.at("path").get<std::string>();
            cfg.data.outlier_path = jd.value("outlier_path", std::string());
            cfg.data.size = jd.value("size", 32);
            require_exists(cfg.data.path, "image directory");
            if (!cfg.data.outlier_path.empty())
                require_exists(cfg.data.outlier_path, "outlier directory");
        } else {
            throw alocc::ConfigError("data.kind must be mnist_idx or image_dir");
        }
        cfg.target_class = j.value("target_class", 1);
        cfg.train_count = j.value("train_count", 0);
        cfg.eval_inlier_count = j.value("eval_inlier_count", 0);
        if (j.contains("fractions")) cfg.fractions = j.at("fractions").get<std::vector<double>>();
        for (double f : cfg.fractions)
            if (!(f > 0.0 && f < 1.0))
                throw alocc::ConfigError("sweep fractions must each lie in (0,1)");
        cfg.base_width = j.value("base_width", 64);
        if (j.contains("train")) cfg.train = alocc::train_config_from_json(j.at("train"));
        if (j.contains("detection")) {
            cfg.detection.tau = j.at("detection").value("tau", 0.5f);
            if (j.at("detection").contains("tau")) cfg.config_tau = cfg.detection.tau;
            const std::string mode = j.at("detection").value("mode", std::string("occ2"));
            if (mode == "occ1") cfg.detection.mode = alocc::OccMode::Occ1;
            else if (mode == "occ2") cfg.detection.mode = alocc::OccMode::Occ2;
            else throw alocc::ConfigError("detection.mode must be occ1 or occ2");
            alocc::validate(cfg.detection);
        }
        cfg.out_dir = j.value("out_dir", std::string("out"));
    } catch (const json::exception& e) {
        throw alocc::ConfigError("config: " + std::string(e.what()));
    }
    alocc::validate(cfg.train);
    return cfg;
}

alocc::Dataset load_dataset(const DataSpec& spec) {
    if (spec.kind == "mnist_idx") return alocc::load_mnist_idx(spec.images, spec.labels);
    return alocc::load_image_dir(spec.path, spec.size);
}

struct SplitData {
    alocc::Dataset train_set;
    alocc::Dataset eval_inliers;
    alocc::Dataset outlier_pool;
};

SplitData split_dataset(const ExperimentConfig& cfg) {
    SplitData out;
    if (cfg.data.kind == "mnist_idx") {
        const alocc::Dataset all = load_dataset(cfg.data);
        const alocc::Dataset target = all.where_label(cfg.target_class, true);
        if (target.size() == 0)
            throw alocc::UsageError("no samples of the target class in the dataset");
        const size_t n_train =
            cfg.train_count > 0 ? std::min<size_t>(cfg.train_count, target.size()) : target.size();
        std::vector<size_t> idx_train(n_train), idx_eval;
        std::iota(idx_train.begin(), idx_train.end(), size_t(0));
        for (size_t i = n_train; i < target.size(); ++i) idx_eval.push_back(i);
        if (cfg.eval_inlier_count > 0 && idx_eval.size() > size_t(cfg.eval_inlier_count))
            idx_eval.resize(cfg.eval_inlier_count);
        out.train_set = target.subset(idx_train);
        out.eval_inliers = target.subset(idx_eval);
        out.outlier_pool = all.where_label(cfg.target_class, false);
    } else {
        out.train_set = load_dataset(cfg.data);
        if (!cfg.data.outlier_path.empty())
            out.outlier_pool = alocc::load_image_dir(cfg.data.outlier_path, cfg.data.size);
        // image_dir: the whole directory trains; eval inliers need a
        // separate run over eval data (export-scores) or train_count split.
        if (cfg.train_count > 0 && size_t(cfg.train_count) < out.train_set.size()) {
            std::vector<size_t> idx_train(cfg.train_count), idx_eval;
            std::iota(idx_train.begin(), idx_train.end(), size_t(0));
            for (size_t i = cfg.train_count; i < out.train_set.size(); ++i) idx_eval.push_back(i);
            out.eval_inliers = out.train_set.subset(idx_eval);
            out.train_set = out.train_set.subset(idx_train);
        }
    }
    return out;
}

std::vector<float> score_all(const alocc::Network& r, const alocc::Network& d,
                             const alocc::Dataset& ds, alocc::OccMode mode) {
    std::vector<float> scores;
    scores.reserve(ds.size());
    const size_t chunk = 128;
    for (size_t start = 0; start < ds.size(); start += chunk) {
        std::vector<size_t> idx;
        for (size_t i = start; i < std::min(ds.size(), start + chunk); ++i) idx.push_back(i);
        const std::vector<float> s = alocc::score_batch(r, d, ds.batch(idx), mode);
        scores.insert(scores.end(), s.begin(), s.end());
    }
    return scores;
}

int run_train(const std::string& config_path, const std::string& out_override,
              std::optional<uint64_t> seed_override) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    if (seed_override) cfg.train.seed = *seed_override;
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;

    SplitData data = split_dataset(cfg);
    if (data.train_set.size() == 0) throw alocc::UsageError("training set is empty");
    std::cout << "training on " << data.train_set.size() << " target samples ("
              << data.train_set.channels << "x" << data.train_set.height << "x"
              << data.train_set.width << ")\n";

    alocc::Network r = alocc::build_r(
        alocc::default_r_config(data.train_set.channels, cfg.base_width),
        alocc::derive_seed(cfg.train.seed, 1));
    alocc::Network d = alocc::build_d(
        alocc::default_d_config(data.train_set.channels, cfg.base_width),
        alocc::derive_seed(cfg.train.seed, 2));

    const alocc::TrainReport report = alocc::train(r, d, data.train_set, cfg.train, &std::cout);
    std::cout << "stopped after " << report.epochs_run() << " epoch(s): "
              << to_string(report.stop_reason) << "\n";

    fs::create_directories(out_dir);
    const std::string model_path = (fs::path(out_dir) / "model.alocc").string();
    save_checkpoint(model_path, make_checkpoint(r, d, cfg.train, cfg.train.seed));
    write_train_report_csv((fs::path(out_dir) / "train_report.csv").string(), report);
    std::cout << "wrote " << model_path << "\n";
    return 0;
}

// Empty mode string keeps both OCC modes in the metric report.
bool mode_selected(const std::string& mode_filter, const char* mode) {
    return mode_filter.empty() || mode_filter == mode;
}

int run_eval(const std::string& model_path, const std::string& config_path,
             std::optional<double> tau, std::optional<uint64_t> seed_override,
             const std::string& out_override, const std::string& mode_filter) {
    ExperimentConfig cfg = load_experiment_config(config_path);
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
    const uint64_t seed = seed_override ? *seed_override : cfg.train.seed;
    // Threshold precedence: --tau flag, then the config's detection.tau,
    // then the per-set best-F1 sweep.
    if (!tau.has_value()) tau = cfg.config_tau;

    const alocc::Checkpoint ckpt = alocc::load_checkpoint(model_path);
    auto [r, d] = alocc::restore_networks(ckpt);

    SplitData data = split_dataset(cfg);
    if (data.eval_inliers.size() == 0)
        throw alocc::UsageError("no held-out inliers: set train_count below the target-class count");
    if (data.outlier_pool.size() == 0) throw alocc::UsageError("no outlier pool available");

    fs::create_directories(out_dir);
    const std::string metrics_path = (fs::path(out_dir) / "metrics.csv").string();
    fs::remove(metrics_path);

    for (double f : cfg.fractions) {
        const uint64_t mix_seed = alocc::derive_seed(seed, 100 + uint64_t(std::lround(f * 1000)));
        const alocc::Dataset mix =
            alocc::make_mixture(data.eval_inliers, data.outlier_pool, f, mix_seed);

        const std::vector<float> occ1 = score_all(r, d, mix, alocc::OccMode::Occ1);
        const std::vector<float> occ2 = score_all(r, d, mix, alocc::OccMode::Occ2);

        std::vector<int> truth(mix.size());
        alocc::LabeledScores ls1, ls2;
        for (size_t i = 0; i < mix.size(); ++i) {
            const bool inlier = mix.roles[i] == alocc::Role::Inlier;
            truth[i] = inlier ? 1 : 0;
            ls1.push(occ1[i], inlier);
            ls2.push(occ2[i], inlier);
        }

        std::ostringstream name;
        name << "scores_f" << std::lround(f * 100) << ".csv";
        alocc::write_scores_csv((fs::path(out_dir) / name.str()).string(), occ1, occ2, truth);

        std::cout << "fraction " << f;
        if (mode_selected(mode_filter, "occ1")) {
            const alocc::MetricReport m = alocc::evaluate(ls1, tau);
            alocc::append_metrics_csv(metrics_path, f, "occ1", m);
            std::cout << "  occ1: F1 " << m.f1 << " AUC " << m.auc << " EER " << m.eer;
        }
        if (mode_selected(mode_filter, "occ2")) {
            const alocc::MetricReport m = alocc::evaluate(ls2, tau);
            alocc::append_metrics_csv(metrics_path, f, "occ2", m);
            std::cout << "  occ2: F1 " << m.f1 << " AUC " << m.auc << " EER " << m.eer;
        }
        std::cout << "\n";
    }
    std::cout << "wrote " << metrics_path << "\n";
    return 0;
}

int run_score_frames(const std::string& model_path, const std::string& frames_dir,
                     const std::string& labels_path, std::optional<double> tau,
                     const std::string& out_dir, int patch, int stride,
                     const std::string& mode_filter) {
    const alocc::Checkpoint ckpt = alocc::load_checkpoint(model_path);
    auto [r, d] = alocc::restore_networks(ckpt);
    const int net_size = ckpt.r_config.input_size;

    const std::vector<alocc::GrayImage> frames = alocc::load_frames(frames_dir);
    std::ifstream gt(labels_path);
    if (!gt) throw alocc::ConfigError("cannot open ground-truth labels " + labels_path);
    std::vector<int> anomalous;
    int v;
    while (gt >> v) anomalous.push_back(v);
    if (anomalous.size() != frames.size())
        throw alocc::UsageError("ground-truth label count (" + std::to_string(anomalous.size()) +
                                ") does not match frame count (" + std::to_string(frames.size()) +
                                ")");

    std::vector<float> occ1_frame, occ2_frame;
    std::vector<int> truth;
    alocc::LabeledScores ls1, ls2;
    for (size_t i = 0; i < frames.size(); ++i) {
        const alocc::Dataset patches = alocc::extract_patches(frames[i], patch, stride, net_size);
        std::vector<size_t> all(patches.size());
        std::iota(all.begin(), all.end(), size_t(0));
        const alocc::Tensor<float> batch = patches.batch(all);
        const std::vector<float> s1 = alocc::score_batch(r, d, batch, alocc::OccMode::Occ1);
        const std::vector<float> s2 = alocc::score_batch(r, d, batch, alocc::OccMode::Occ2);
        occ1_frame.push_back(*std::min_element(s1.begin(), s1.end()));
        occ2_frame.push_back(*std::min_element(s2.begin(), s2.end()));
        const bool normal = anomalous[i] == 0;
        truth.push_back(normal ? 1 : 0);
        ls1.push(occ1_frame.back(), normal);
        ls2.push(occ2_frame.back(), normal);
    }

    fs::create_directories(out_dir);
    alocc::write_scores_csv((fs::path(out_dir) / "frames.csv").string(), occ1_frame, occ2_frame,
                            truth);

    const double anomaly_fraction =
        static_cast<double>(std::count(anomalous.begin(), anomalous.end(), 1)) /
        static_cast<double>(anomalous.size());
    const std::string metrics_path = (fs::path(out_dir) / "frame_metrics.csv").string();
    fs::remove(metrics_path);
    std::cout << "frame-level EER ";
    if (mode_selected(mode_filter, "occ1")) {
        const alocc::MetricReport m = alocc::evaluate(ls1, tau);
        alocc::append_metrics_csv(metrics_path, anomaly_fraction, "occ1", m);
        std::cout << " occ1: " << m.eer;
    }
    if (mode_selected(mode_filter, "occ2")) {
        const alocc::MetricReport m = alocc::evaluate(ls2, tau);
        alocc::append_metrics_csv(metrics_path, anomaly_fraction, "occ2", m);
        std::cout << " occ2: " << m.eer;
    }
    std::cout << "\n";
    return 0;
}

int run_export_scores(const std::string& model_path, const std::string& data_dir, int size,
                      const std::string& out_csv) {
    const alocc::Checkpoint ckpt = alocc::load_checkpoint(model_path);
    auto [r, d] = alocc::restore_networks(ckpt);
    const alocc::Dataset ds = alocc::load_image_dir(data_dir, size);
    if (ds.size() == 0) throw alocc::UsageError("no images found in " + data_dir);

    const std::vector<float> occ1 = score_all(r, d, ds, alocc::OccMode::Occ1);
    const std::vector<float> occ2 = score_all(r, d, ds, alocc::OccMode::Occ2);
    const std::vector<int> unknown(ds.size(), -1);
    alocc::write_scores_csv(out_csv, occ1, occ2, unknown);
    std::cout << "wrote " << out_csv << " (" << ds.size() << " samples)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"alocc: adversarially learned one-class classifier"};
    app.require_subcommand(1);

    std::string config_path, model_path, data_path, labels_path, mode_filter;
    std::string out_train, out_eval, out_frames = "out", out_csv = "scores.csv";
    double tau_flag = -1.0;
    uint64_t seed_flag = 0;
    bool seed_set = false, tau_set = false;
    int size = 32, patch = 30, stride = 30;

    CLI::App* t = app.add_subcommand("train", "train R+D on the target class");
    t->add_option("--config", config_path, "experiment config (JSON)")->required();
    t->add_option("--out", out_train, "output directory (default: config out_dir)");
    t->add_option("--seed", seed_flag, "override the training seed")
        ->each([&](const std::string&) { seed_set = true; });

    CLI::App* e = app.add_subcommand("eval", "score outlier mixtures and report F1/AUC/EER");
    e->add_option("--model", model_path, "checkpoint file")->required();
    e->add_option("--config", config_path, "experiment config (JSON)")->required();
    e->add_option("--tau", tau_flag, "fixed decision threshold (default: best-F1 sweep)")
        ->each([&](const std::string&) { tau_set = true; });
    e->add_option("--seed", seed_flag, "mixture sampling seed")
        ->each([&](const std::string&) { seed_set = true; });
    e->add_option("--out", out_eval, "output directory (default: config out_dir)");
    e->add_option("--mode", mode_filter, "restrict the metric report to occ1 or occ2")
        ->check(CLI::IsMember({"occ1", "occ2"}));

    CLI::App* s = app.add_subcommand("score-frames", "patch-based frame scoring with frame EER");
    s->add_option("--model", model_path, "checkpoint file")->required();
    s->add_option("--data", data_path, "directory of frame images")->required();
    s->add_option("--labels", labels_path, "ground truth: one 0/1 per line (1 = anomalous)")
        ->required();
    s->add_option("--tau", tau_flag, "fixed decision threshold")
        ->each([&](const std::string&) { tau_set = true; });
    s->add_option("--out", out_frames, "output directory");
    s->add_option("--patch", patch, "patch size (default 30)");
    s->add_option("--stride", stride, "patch stride (default 30)");
    s->add_option("--mode", mode_filter, "restrict the metric report to occ1 or occ2")
        ->check(CLI::IsMember({"occ1", "occ2"}));

    CLI::App* x = app.add_subcommand("export-scores", "score a directory of images to CSV");
    x->add_option("--model", model_path, "checkpoint file")->required();
    x->add_option("--data", data_path, "image directory")->required();
    x->add_option("--size", size, "resize edge length (default 32)");
    x->add_option("--out", out_csv, "output CSV path (default scores.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    }

    try {
        const std::optional<uint64_t> seed = seed_set ? std::optional<uint64_t>(seed_flag)
                                                      : std::nullopt;
        const std::optional<double> tau = tau_set ? std::optional<double>(tau_flag) : std::nullopt;
        if (t->parsed()) return run_train(config_path, out_train, seed);
        if (e->parsed())
            return run_eval(model_path, config_path, tau, seed, out_eval, mode_filter);
        if (s->parsed())
            return run_score_frames(model_path, data_path, labels_path, tau, out_frames, patch,
                                    stride, mode_filter);
        if (x->parsed()) return run_export_scores(model_path, data_path, size, out_csv);
    } catch (const alocc::NumericError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    } catch (const alocc::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "unexpected error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
