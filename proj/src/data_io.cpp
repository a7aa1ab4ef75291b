#include "srdcnn/data_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "srdcnn/kernels.hpp"

namespace srdcnn {
namespace {

using nlohmann::json;

double parse_field(const std::string& token, std::size_t line_no) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &consumed);
    } catch (const std::exception&) {
        throw parse_error("line " + std::to_string(line_no) + ": cannot parse '" + token + "' as a number");
    }
    if (consumed != token.size()) {
        throw parse_error("line " + std::to_string(line_no) + ": trailing characters in '" + token + "'");
    }
    if (!std::isfinite(value)) {
        throw parse_error("line " + std::to_string(line_no) + ": non-finite value '" + token + "'");
    }
    return value;
}

} // namespace

LabeledDataset load_ucr(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open dataset file " + path.string());

    std::vector<double> values;
    std::vector<long long> labels;
    std::size_t length = 0, rows = 0, line_no = 0;

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        for (char& c : line) {
            if (c == ',' || c == '\t' || c == '\r') c = ' ';
        }
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) continue; // blank line

        const double label_value = parse_field(token, line_no);
        if (label_value != std::floor(label_value) || std::fabs(label_value) > 9.0e15) {
            throw parse_error("line " + std::to_string(line_no) + ": label '" + token +
                              "' is not integer-valued");
        }
        labels.push_back(static_cast<long long>(label_value));

        std::size_t count = 0;
        while (fields >> token) {
            values.push_back(parse_field(token, line_no));
            ++count;
        }
        if (count == 0) {
            throw format_error("line " + std::to_string(line_no) + ": no series values after the label");
        }
        if (rows == 0) {
            length = count;
        } else if (count != length) {
            throw format_error("line " + std::to_string(line_no) + ": row has " + std::to_string(count) +
                               " values, expected " + std::to_string(length));
        }
        ++rows;
    }
    if (rows == 0) throw data_error("dataset file " + path.string() + " contains no instances");

    return LabeledDataset::from(Tensor({rows, length}, std::move(values)), std::move(labels));
}

void znormalize_series(double* x, std::size_t n) {
    const auto& ops = kernels::active();
    const double mean = ops.sum(x, n) / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        sq += d * d;
    }
    const double std_dev = std::sqrt(sq / static_cast<double>(n));
    if (std_dev < 1e-12) {
        std::fill(x, x + n, 0.0);
        return;
    }
    const double inv = 1.0 / std_dev;
    ops.affine(inv, -mean * inv, x, x, n);
}

Tensor znormalize(const Tensor& series) {
    if (series.rank() != 1) {
        throw dimension_error("znormalize expects a rank-1 series, got " + series.shape_string());
    }
    Tensor out = series;
    znormalize_series(out.data(), out.size());
    return out;
}

void znormalize(LabeledDataset& dataset) {
    const std::size_t t = dataset.length();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        znormalize_series(dataset.series.data() + i * t, t);
    }
}

namespace {

json tensor_block(const std::string& name, const Tensor& t) {
    return json{{"name", name}, {"shape", t.shape()}, {"data", t.storage()}};
}

json hyperparameters_json(const Hyperparameters& hp) {
    return json{
        {"epochs", hp.epochs},
        {"num_layers", hp.num_layers},
        {"kernel_sizes", hp.kernel_sizes},
        {"filters", hp.filters},
        {"alpha1", hp.penalty.alpha1},
        {"alpha2", hp.penalty.alpha2},
        {"lr", hp.lr},
        {"beta1", hp.beta1},
        {"beta2", hp.beta2},
        {"eps_adam", hp.eps_adam},
        {"bn_eps", hp.bn_eps},
        {"bn_momentum", hp.bn_momentum},
        {"seed", hp.seed},
        {"batch_cap", hp.batch_cap},
        {"batch_divisor", hp.batch_divisor},
    };
}

Hyperparameters hyperparameters_from_json(const json& j) {
    Hyperparameters hp;
    hp.epochs = j.at("epochs").get<std::size_t>();
    hp.num_layers = j.at("num_layers").get<std::size_t>();
    hp.kernel_sizes = j.at("kernel_sizes").get<std::vector<std::size_t>>();
    hp.filters = j.at("filters").get<std::vector<std::size_t>>();
    hp.penalty.alpha1 = j.at("alpha1").get<double>();
    hp.penalty.alpha2 = j.at("alpha2").get<double>();
    hp.lr = j.at("lr").get<double>();
    hp.beta1 = j.at("beta1").get<double>();
    hp.beta2 = j.at("beta2").get<double>();
    hp.eps_adam = j.at("eps_adam").get<double>();
    hp.bn_eps = j.at("bn_eps").get<double>();
    hp.bn_momentum = j.at("bn_momentum").get<double>();
    hp.seed = j.at("seed").get<std::uint64_t>();
    hp.batch_cap = j.at("batch_cap").get<std::size_t>();
    hp.batch_divisor = j.at("batch_divisor").get<std::size_t>();
    return hp;
}

Tensor tensor_from_block(const json& block) {
    auto shape = block.at("shape").get<std::vector<std::size_t>>();
    auto data = block.at("data").get<std::vector<double>>();
    return Tensor(std::move(shape), std::move(data));
}

} // namespace

void save_model(const SrdcnnModel& model, const std::filesystem::path& path) {
    json blocks = json::array();
    for (std::size_t i = 0; i < model.blocks.size(); ++i) {
        const std::string tag = std::to_string(i + 1);
        const ConvBlock& blk = model.blocks[i];
        blocks.push_back(tensor_block("conv" + tag + ".weight", blk.conv.weights));
        blocks.push_back(tensor_block("conv" + tag + ".bias", blk.conv.bias));
        blocks.push_back(tensor_block("bn" + tag + ".gamma", blk.bn.gamma));
        blocks.push_back(tensor_block("bn" + tag + ".beta", blk.bn.beta));
        blocks.push_back(tensor_block("bn" + tag + ".running_mean", blk.bn.running_mean));
        blocks.push_back(tensor_block("bn" + tag + ".running_var", blk.bn.running_var));
    }
    blocks.push_back(tensor_block("dense.weight", model.dense.weights));
    blocks.push_back(tensor_block("dense.bias", model.dense.bias));

    const json doc{
        {"format_version", kCheckpointFormatVersion},
        {"hyperparameters", hyperparameters_json(model.hp)},
        {"label_map", model.label_map},
        {"trained_length", model.trained_length},
        {"blocks", blocks},
    };

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw data_error("cannot write checkpoint " + path.string());
    out << doc.dump(2) << "\n";
    if (!out) throw data_error("failed writing checkpoint " + path.string());
}

SrdcnnModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open checkpoint " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw corruption_error("checkpoint " + path.string() + " is not valid JSON: " + e.what());
    }

    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kCheckpointFormatVersion) {
            throw incompatibility_error("checkpoint " + path.string() + " has format_version " +
                                        std::to_string(version) + ", this build reads " +
                                        std::to_string(kCheckpointFormatVersion));
        }

        SrdcnnModel model;
        model.hp = hyperparameters_from_json(doc.at("hyperparameters"));
        model.label_map = doc.at("label_map").get<std::vector<long long>>();
        model.trained_length = doc.at("trained_length").get<std::size_t>();
        try {
            model.hp.validate();
        } catch (const config_error& e) {
            throw corruption_error("checkpoint " + path.string() + " carries invalid hyperparameters: " +
                                   e.what());
        }

        std::map<std::string, Tensor> by_name;
        for (const json& block : doc.at("blocks")) {
            by_name.emplace(block.at("name").get<std::string>(), tensor_from_block(block));
        }
        auto take = [&](const std::string& name) {
            auto it = by_name.find(name);
            if (it == by_name.end()) {
                throw corruption_error("checkpoint " + path.string() + " is missing block '" + name + "'");
            }
            Tensor t = std::move(it->second);
            by_name.erase(it);
            return t;
        };

        model.blocks.resize(model.hp.num_layers);
        for (std::size_t i = 0; i < model.hp.num_layers; ++i) {
            const std::string tag = std::to_string(i + 1);
            ConvBlock& blk = model.blocks[i];
            blk.conv.weights = take("conv" + tag + ".weight");
            blk.conv.bias = take("conv" + tag + ".bias");
            blk.bn.gamma = take("bn" + tag + ".gamma");
            blk.bn.beta = take("bn" + tag + ".beta");
            blk.bn.running_mean = take("bn" + tag + ".running_mean");
            blk.bn.running_var = take("bn" + tag + ".running_var");
            blk.bn.eps = model.hp.bn_eps;
            blk.bn.momentum = model.hp.bn_momentum;
            if (blk.conv.weights.rank() != 3 || blk.conv.bias.rank() != 1 ||
                blk.conv.bias.extent(0) != blk.conv.weights.extent(0) ||
                blk.bn.gamma.extent(0) != blk.conv.weights.extent(0)) {
                throw corruption_error("checkpoint " + path.string() + " block conv" + tag +
                                       " has inconsistent shapes");
            }
        }
        model.dense.weights = take("dense.weight");
        model.dense.bias = take("dense.bias");
        if (model.dense.weights.rank() != 2 || model.dense.bias.rank() != 1 ||
            model.dense.weights.extent(1) != model.dense.bias.extent(0) ||
            model.dense.bias.extent(0) != model.label_map.size()) {
            throw corruption_error("checkpoint " + path.string() + " dense block has inconsistent shapes");
        }
        return model;
    } catch (const json::exception& e) {
        throw corruption_error("checkpoint " + path.string() + " is malformed: " + e.what());
    }
}

} // namespace srdcnn
