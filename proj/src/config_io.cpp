#include "alocc/config_io.hpp"

namespace alocc {

using nlohmann::json;

namespace {

std::string act_name(Act a) {
    switch (a) {
        case Act::Sigmoid: return "sigmoid";
        case Act::Tanh: return "tanh";
        case Act::LeakyRelu: return "leaky_relu";
    }
    return "sigmoid";
}

Act act_from_name(const std::string& s) {
    if (s == "sigmoid") return Act::Sigmoid;
    if (s == "tanh") return Act::Tanh;
    if (s == "leaky_relu") return Act::LeakyRelu;
    throw ConfigError("unknown activation '" + s + "' (expected sigmoid|tanh|leaky_relu)");
}

} // namespace

json network_config_to_json(const NetworkConfig& cfg) {
    json layers = json::array();
    for (const LayerSpec& l : cfg.layers) {
        json jl;
        switch (l.kind) {
            case LayerKind::Conv:
            case LayerKind::ConvTranspose:
                jl["kind"] = l.kind == LayerKind::Conv ? "conv" : "conv_transpose";
                jl["kernel"] = l.kernel_h;
                jl["in"] = l.in_channels;
                jl["out"] = l.out_channels;
                jl["stride"] = l.stride;
                jl["padding"] = l.padding;
                break;
            case LayerKind::BatchNorm:
                jl["kind"] = "batch_norm";
                jl["channels"] = l.channels;
                break;
            case LayerKind::Activation:
                jl["kind"] = "activation";
                jl["act"] = act_name(l.act);
                if (l.act == Act::LeakyRelu) jl["alpha"] = l.alpha;
                break;
        }
        layers.push_back(jl);
    }
    return json{{"input_size", cfg.input_size},
                {"input_channels", cfg.input_channels},
                {"layers", layers}};
}

NetworkConfig network_config_from_json(const json& j) {
    NetworkConfig cfg;
    try {
        cfg.input_size = j.at("input_size").get<int>();
        cfg.input_channels = j.at("input_channels").get<int>();
        for (const json& jl : j.at("layers")) {
            const std::string kind = jl.at("kind").get<std::string>();
            if (kind == "conv" || kind == "conv_transpose") {
                LayerSpec l = LayerSpec::conv(jl.at("kernel").get<int>(), jl.at("in").get<int>(),
                                              jl.at("out").get<int>(), jl.at("stride").get<int>(),
                                              jl.at("padding").get<int>());
                if (kind == "conv_transpose") l.kind = LayerKind::ConvTranspose;
                cfg.layers.push_back(l);
            } else if (kind == "batch_norm") {
                cfg.layers.push_back(LayerSpec::batch_norm(jl.at("channels").get<int>()));
            } else if (kind == "activation") {
                cfg.layers.push_back(LayerSpec::activation(
                    act_from_name(jl.at("act").get<std::string>()),
                    jl.value("alpha", 0.2f)));
            } else {
                // There is no pooling kind; it gets rejected here with the rest.
                throw ConfigError("unknown layer kind '" + kind +
                                  "' (expected conv|conv_transpose|batch_norm|activation)");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("network config: ") + e.what());
    }
    return cfg;
}

json train_config_to_json(const TrainConfig& cfg) {
    return json{{"lambda", cfg.lambda},
                {"sigma", cfg.sigma},
                {"rho", cfg.rho},
                {"learning_rate", cfg.learning_rate},
                {"beta1", cfg.beta1},
                {"beta2", cfg.beta2},
                {"batch_size", cfg.batch_size},
                {"max_epochs", cfg.max_epochs},
                {"seed", cfg.seed},
                {"eval_every", cfg.eval_every}};
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig cfg;
    try {
        cfg.lambda = j.value("lambda", cfg.lambda);
        cfg.sigma = j.value("sigma", cfg.sigma);
        cfg.rho = j.value("rho", cfg.rho);
        cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
        cfg.beta1 = j.value("beta1", cfg.beta1);
        cfg.beta2 = j.value("beta2", cfg.beta2);
        cfg.batch_size = j.value("batch_size", cfg.batch_size);
        cfg.max_epochs = j.value("max_epochs", cfg.max_epochs);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.eval_every = j.value("eval_every", cfg.eval_every);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("train config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

} // namespace alocc
