// Command-line surface: train | eval | baseline | gradcheck | bench.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "srdcnn/data_io.hpp"
#include "srdcnn/dtw.hpp"
#include "srdcnn/gradcheck.hpp"
#include "srdcnn/kernels.hpp"
#include "srdcnn/model.hpp"
#include "srdcnn/report.hpp"
#include "srdcnn/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
    bool json_output = false;
    bool print_config = false;
    std::string kernels = "auto";
};

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const srdcnn::dimension_error*>(&e)) return "dimension";
    if (dynamic_cast<const srdcnn::parse_error*>(&e)) return "parse";
    if (dynamic_cast<const srdcnn::format_error*>(&e)) return "format";
    if (dynamic_cast<const srdcnn::label_error*>(&e)) return "label";
    if (dynamic_cast<const srdcnn::config_error*>(&e)) return "config";
    if (dynamic_cast<const srdcnn::usage_error*>(&e)) return "usage";
    if (dynamic_cast<const srdcnn::numeric_error*>(&e)) return "numeric";
    if (dynamic_cast<const srdcnn::incompatibility_error*>(&e)) return "incompatibility";
    if (dynamic_cast<const srdcnn::corruption_error*>(&e)) return "corruption";
    if (dynamic_cast<const srdcnn::degenerate_batch_error*>(&e)) return "degenerate_batch";
    if (dynamic_cast<const srdcnn::data_error*>(&e)) return "data";
    return "error";
}

void report_error(const CommonOptions& common, const std::exception& e) {
    if (common.json_output) {
        const json obj{{"error", {{"type", error_kind(e)}, {"message", e.what()}}}};
        std::cerr << obj.dump() << "\n";
    } else {
        std::cerr << "error: " << e.what() << "\n";
    }
}

srdcnn::LabeledDataset load_dataset(const std::string& path, bool znorm) {
    srdcnn::LabeledDataset d = srdcnn::load_ucr(path);
    if (znorm) srdcnn::znormalize(d);
    return d;
}

// Incremental writer so an interrupted run still leaves a valid CSV prefix.
class MetricsCsv {
public:
    explicit MetricsCsv(const fs::path& path) : out_(path, std::ios::trunc) {
        if (!out_) throw srdcnn::data_error("cannot write metrics CSV " + path.string());
        out_ << "epoch,data_loss,l1_penalty,l2_penalty,regularized_cost,train_accuracy,seconds\n";
        out_.flush();
    }

    void append(const srdcnn::EpochRecord& rec) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.6f\n", rec.epoch,
                      rec.data_loss, rec.l1_term, rec.l2_term, rec.regularized_cost,
                      rec.train_accuracy, rec.seconds);
        out_ << buf;
        out_.flush();
    }

private:
    std::ofstream out_;
};

void append_report_entries(const fs::path& path, const std::vector<srdcnn::MeasuredResult>& measured) {
    json rows = json::array();
    if (fs::exists(path)) {
        std::ifstream in(path);
        try {
            rows = json::parse(in);
        } catch (const json::exception& e) {
            throw srdcnn::corruption_error("report " + path.string() + " is not valid JSON: " + e.what());
        }
        if (!rows.is_array()) {
            throw srdcnn::format_error("report " + path.string() + " must hold a JSON array");
        }
    }
    for (const srdcnn::MeasuredResult& r : measured) {
        rows.push_back({{"dataset", r.dataset},
                        {"source", "measured"},
                        {"method", r.method},
                        {"accuracy", r.accuracy},
                        {"citation", "measured"}});
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw srdcnn::data_error("cannot write report " + path.string());
    out << rows.dump(2) << "\n";
}

fs::path find_split_file(const fs::path& dir, const std::string& dataset, const char* split) {
    const std::string stem = dataset + "_" + split;
    for (const char* ext : {".txt", ".tsv", ".csv", ""}) {
        const fs::path candidate = dir / (stem + ext);
        if (fs::exists(candidate)) return candidate;
    }
    throw srdcnn::data_error("no " + stem + "(.txt|.tsv|.csv) under " + dir.string());
}

// --- subcommand configs -------------------------------------------------

struct TrainOptions {
    std::string train_path;
    std::string out_path = "model.json";
    std::string metrics_path = "metrics.csv";
    bool znormalize = false;
    srdcnn::Hyperparameters hp;
};

struct EvalOptions {
    std::string model_path;
    std::string test_path;
    std::string report_path;
    std::string dataset_name;
    bool znormalize = false;
};

struct BaselineOptions {
    std::string train_path;
    std::string test_path;
    std::string report_path;
    std::string dataset_name;
    double window = 1.0;
    unsigned threads = 0;
    bool znormalize = false;
};

struct GradcheckOptions {
    double threshold = 1e-4;
    double step = 1e-5;
    std::uint64_t seed = 0;
    bool tiny = true;
};

struct BenchOptions {
    std::vector<std::string> datasets;
    std::string data_dir = "data";
    std::string out_path = "report.json";
    double window = 1.0;
    bool znormalize = false;
    srdcnn::Hyperparameters hp;
};

void add_hyperparameter_options(CLI::App& cmd, srdcnn::Hyperparameters& hp) {
    cmd.add_option("--epochs", hp.epochs, "training epochs")->capture_default_str();
    cmd.add_option("--lr", hp.lr, "Adam learning rate")->capture_default_str();
    cmd.add_option("--alpha1", hp.penalty.alpha1, "L1 penalty factor")->capture_default_str();
    cmd.add_option("--alpha2", hp.penalty.alpha2, "L2 penalty factor")->capture_default_str();
    cmd.add_option("--seed", hp.seed, "RNG seed")->capture_default_str();
    cmd.add_option("--bn-eps", hp.bn_eps, "batch-norm variance epsilon")->capture_default_str();
    cmd.add_option("--bn-momentum", hp.bn_momentum, "running-statistics update fraction")
        ->capture_default_str();
}

int run_train(const CommonOptions& common, const TrainOptions& opt) {
    const srdcnn::LabeledDataset dataset = load_dataset(opt.train_path, opt.znormalize);
    MetricsCsv csv(opt.metrics_path);
    const srdcnn::TrainResult result = srdcnn::train(
        dataset, opt.hp, [&csv](const srdcnn::EpochRecord& rec) { csv.append(rec); });
    srdcnn::save_model(result.model, opt.out_path);

    const srdcnn::EpochRecord& last = result.history.epochs.back();
    if (common.json_output) {
        const json summary{{"command", "train"},
                           {"instances", dataset.size()},
                           {"epochs", result.history.epochs.size()},
                           {"final_train_accuracy", last.train_accuracy},
                           {"final_regularized_cost", last.regularized_cost},
                           {"checkpoint", opt.out_path},
                           {"metrics", opt.metrics_path}};
        std::cout << summary.dump() << "\n";
    } else {
        std::printf("trained %zu instances for %zu epochs: train accuracy %.4f, cost %.6f\n",
                    dataset.size(), result.history.epochs.size(), last.train_accuracy,
                    last.regularized_cost);
        std::printf("checkpoint: %s\nmetrics:    %s\n", opt.out_path.c_str(), opt.metrics_path.c_str());
    }
    return 0;
}

int run_eval(const CommonOptions& common, const EvalOptions& opt) {
    const srdcnn::SrdcnnModel model = srdcnn::load_model(opt.model_path);
    const srdcnn::LabeledDataset test = load_dataset(opt.test_path, opt.znormalize);
    const double accuracy = srdcnn::evaluate(model, test);

    std::string dataset = opt.dataset_name;
    if (dataset.empty()) dataset = fs::path(opt.test_path).stem().string();
    if (!opt.report_path.empty()) {
        append_report_entries(opt.report_path, {{dataset, "SRDCNN", accuracy}});
    }
    if (common.json_output) {
        std::cout << json{{"command", "eval"}, {"dataset", dataset}, {"accuracy", accuracy}}.dump()
                  << "\n";
    } else {
        std::printf("accuracy %.4f on %zu instances\n", accuracy, test.size());
    }
    return 0;
}

int run_baseline(const CommonOptions& common, const BaselineOptions& opt) {
    const srdcnn::LabeledDataset train = load_dataset(opt.train_path, opt.znormalize);
    const srdcnn::LabeledDataset test = load_dataset(opt.test_path, opt.znormalize);
    const srdcnn::DtwConfig cfg{opt.window, true};
    const double accuracy = srdcnn::baseline_evaluate(train, test, cfg, opt.threads);

    std::string dataset = opt.dataset_name;
    if (dataset.empty()) dataset = fs::path(opt.test_path).stem().string();
    if (!opt.report_path.empty()) {
        append_report_entries(opt.report_path, {{dataset, "DTW-R1-1NN", accuracy}});
    }
    if (common.json_output) {
        std::cout << json{{"command", "baseline"},
                          {"dataset", dataset},
                          {"window", opt.window},
                          {"accuracy", accuracy}}
                         .dump()
                  << "\n";
    } else {
        std::printf("DTW-1NN accuracy %.4f on %zu instances (window %.2f)\n", accuracy, test.size(),
                    opt.window);
    }
    return 0;
}

int run_gradcheck(const CommonOptions& common, const GradcheckOptions& opt) {
    // tiny end-to-end model: 2 classes, short series, two small conv blocks
    srdcnn::Hyperparameters hp;
    hp.num_layers = 2;
    hp.kernel_sizes = {3, 2};
    hp.filters = {2, 2};
    srdcnn::SrdcnnModel model = srdcnn::build_model(2, 8, hp, opt.seed);

    std::mt19937_64 gen(opt.seed + 1);
    srdcnn::Tensor batch({4, 1, 8});
    for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = srdcnn::uniform_range(gen, -1.0, 1.0);
    const std::vector<std::size_t> labels = {0, 1, 0, 1};

    const srdcnn::GradReport report =
        srdcnn::gradient_check(model, batch, labels, hp.penalty, opt.threshold, opt.step);

    if (common.json_output) {
        json blocks = json::array();
        for (const auto& b : report.blocks) {
            blocks.push_back({{"name", b.name}, {"max_rel_err", b.max_rel_err}, {"checked", b.checked}});
        }
        std::cout << json{{"command", "gradcheck"},
                          {"pass", report.pass},
                          {"global_max_rel_err", report.global_max},
                          {"threshold", report.threshold},
                          {"blocks", blocks}}
                         .dump()
                  << "\n";
    } else {
        for (const auto& b : report.blocks) {
            std::printf("%-14s max rel err %.3e  (%zu coords)\n", b.name.c_str(), b.max_rel_err,
                        b.checked);
        }
        std::printf("%s: global max %.3e vs threshold %.1e\n", report.pass ? "PASS" : "FAIL",
                    report.global_max, report.threshold);
    }
    return report.pass ? 0 : 1;
}

int run_bench(const CommonOptions& common, const BenchOptions& opt) {
    std::vector<std::string> requested;
    for (const std::string& name : opt.datasets) {
        if (name == "all") {
            for (const char* d : srdcnn::published_datasets()) requested.emplace_back(d);
            continue;
        }
        const auto canonical = srdcnn::canonical_dataset_name(name);
        if (!canonical) {
            throw srdcnn::config_error("unknown dataset '" + name + "'; see the published table");
        }
        requested.push_back(*canonical);
    }

    std::vector<srdcnn::MeasuredResult> measured;
    for (const std::string& dataset : requested) {
        const fs::path train_file = find_split_file(opt.data_dir, dataset, "TRAIN");
        const fs::path test_file = find_split_file(opt.data_dir, dataset, "TEST");
        srdcnn::LabeledDataset train_set = load_dataset(train_file.string(), opt.znormalize);
        srdcnn::LabeledDataset test_set = load_dataset(test_file.string(), opt.znormalize);

        if (!common.json_output) {
            std::printf("%s: training (%zu instances, length %zu)...\n", dataset.c_str(),
                        train_set.size(), train_set.length());
        }
        const srdcnn::TrainResult trained = srdcnn::train(train_set, opt.hp);
        measured.push_back({dataset, "SRDCNN", srdcnn::evaluate(trained.model, test_set)});
        measured.push_back(
            {dataset, "DTW-R1-1NN",
             srdcnn::baseline_evaluate(train_set, test_set, srdcnn::DtwConfig{opt.window, true})});
    }

    std::ofstream out(opt.out_path, std::ios::trunc);
    if (!out) throw srdcnn::data_error("cannot write report " + opt.out_path);
    out << srdcnn::render_report_json(measured);

    if (common.json_output) {
        json rows = json::array();
        for (const auto& r : measured) {
            rows.push_back({{"dataset", r.dataset}, {"method", r.method}, {"accuracy", r.accuracy}});
        }
        std::cout << json{{"command", "bench"}, {"measured", rows}, {"report", opt.out_path}}.dump()
                  << "\n";
    } else {
        std::cout << srdcnn::render_text_table(measured);
        std::printf("report written to %s\n", opt.out_path.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"srdcnn: strongly regularized 1D CNN for univariate time-series classification"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read option defaults from an INI/TOML file");

    CommonOptions common;
    app.add_flag("--json", common.json_output, "machine-readable stdout/stderr");
    app.add_flag("--print-config", common.print_config, "dump the resolved configuration");
    app.add_option("--kernels", common.kernels, "kernel backend: auto | scalar | avx2")
        ->capture_default_str();

    TrainOptions train_opt;
    CLI::App* train_cmd = app.add_subcommand("train", "train a model on a UCR-format file");
    train_cmd->add_option("--train", train_opt.train_path, "training set path")->required();
    train_cmd->add_option("--out", train_opt.out_path, "checkpoint path")->capture_default_str();
    train_cmd->add_option("--metrics", train_opt.metrics_path, "per-epoch metrics CSV path")
        ->capture_default_str();
    train_cmd->add_flag("--znormalize", train_opt.znormalize, "z-normalize each series first");
    add_hyperparameter_options(*train_cmd, train_opt.hp);

    EvalOptions eval_opt;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a test set");
    eval_cmd->add_option("--model", eval_opt.model_path, "checkpoint path")->required();
    eval_cmd->add_option("--test", eval_opt.test_path, "test set path")->required();
    eval_cmd->add_option("--report", eval_opt.report_path, "report JSON to append to");
    eval_cmd->add_option("--dataset", eval_opt.dataset_name, "dataset name for the report");
    eval_cmd->add_flag("--znormalize", eval_opt.znormalize, "z-normalize each series first");

    BaselineOptions baseline_opt;
    CLI::App* baseline_cmd = app.add_subcommand("baseline", "DTW 1-NN baseline accuracy");
    baseline_cmd->add_option("--train", baseline_opt.train_path, "training set path")->required();
    baseline_cmd->add_option("--test", baseline_opt.test_path, "test set path")->required();
    baseline_cmd->add_option("--report", baseline_opt.report_path, "report JSON to append to");
    baseline_cmd->add_option("--dataset", baseline_opt.dataset_name, "dataset name for the report");
    baseline_cmd->add_option("--window", baseline_opt.window, "warping window fraction in [0,1]")
        ->capture_default_str();
    baseline_cmd->add_option("--threads", baseline_opt.threads, "query threads (0 = hardware)");
    baseline_cmd->add_flag("--znormalize", baseline_opt.znormalize, "z-normalize each series first");

    GradcheckOptions gradcheck_opt;
    CLI::App* gradcheck_cmd =
        app.add_subcommand("gradcheck", "finite-difference certification of the gradients");
    gradcheck_cmd->add_flag("--tiny", gradcheck_opt.tiny, "use the tiny end-to-end model (default)");
    gradcheck_cmd->add_option("--threshold", gradcheck_opt.threshold, "max relative error allowed")
        ->capture_default_str();
    gradcheck_cmd->add_option("--step", gradcheck_opt.step, "central-difference step")
        ->capture_default_str();
    gradcheck_cmd->add_option("--seed", gradcheck_opt.seed, "RNG seed")->capture_default_str();

    BenchOptions bench_opt;
    CLI::App* bench_cmd = app.add_subcommand("bench", "measure datasets and compare with published results");
    bench_cmd->add_option("--dataset", bench_opt.datasets, "dataset name(s), or 'all'")->required();
    bench_cmd->add_option("--data-dir", bench_opt.data_dir, "directory with <Name>_TRAIN/<Name>_TEST files")
        ->capture_default_str();
    bench_cmd->add_option("--out", bench_opt.out_path, "report JSON path")->capture_default_str();
    bench_cmd->add_option("--window", bench_opt.window, "DTW warping window")->capture_default_str();
    bench_cmd->add_flag("--znormalize", bench_opt.znormalize, "z-normalize each series first");
    add_hyperparameter_options(*bench_cmd, bench_opt.hp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (common.json_output && e.get_exit_code() != 0) {
            std::cerr << json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << "\n";
            return e.get_exit_code();
        }
        return app.exit(e);
    }

    try {
        srdcnn::kernels::select_by_name(common.kernels);
        if (common.print_config) {
            std::cout << app.config_to_str(true, true);
        }
        if (train_cmd->parsed()) return run_train(common, train_opt);
        if (eval_cmd->parsed()) return run_eval(common, eval_opt);
        if (baseline_cmd->parsed()) return run_baseline(common, baseline_opt);
        if (gradcheck_cmd->parsed()) return run_gradcheck(common, gradcheck_opt);
        if (bench_cmd->parsed()) return run_bench(common, bench_opt);
    } catch (const std::exception& e) {
        report_error(common, e);
        return 1;
    }
    return 0;
}
