#include "alocc/network.hpp"

#include <sstream>

namespace alocc {

LayerSpec LayerSpec::conv(int k, int in_ch, int out_ch, int stride, int pad) {
    LayerSpec s;
    s.kind = LayerKind::Conv;
    s.kernel_h = s.kernel_w = k;
    s.in_channels = in_ch;
    s.out_channels = out_ch;
    s.stride = stride;
    s.padding = pad;
    return s;
}

LayerSpec LayerSpec::conv_transpose(int k, int in_ch, int out_ch, int stride, int pad) {
    LayerSpec s = conv(k, in_ch, out_ch, stride, pad);
    s.kind = LayerKind::ConvTranspose;
    return s;
}

LayerSpec LayerSpec::batch_norm(int channels) {
    LayerSpec s;
    s.kind = LayerKind::BatchNorm;
    s.channels = channels;
    return s;
}

LayerSpec LayerSpec::activation(Act kind, float alpha) {
    LayerSpec s;
    s.kind = LayerKind::Activation;
    s.act = kind;
    s.alpha = alpha;
    return s;
}

NetworkConfig default_r_config(int input_channels, int base_width, int input_size) {
    const int b = base_width;
    NetworkConfig cfg;
    cfg.input_size = input_size;
    cfg.input_channels = input_channels;
    cfg.layers = {
        LayerSpec::conv(5, input_channels, b, 2, 2),
        LayerSpec::batch_norm(b),
        LayerSpec::activation(Act::LeakyRelu, 0.2f),
        LayerSpec::conv(5, b, 2 * b, 2, 2),
        LayerSpec::batch_norm(2 * b),
        LayerSpec::activation(Act::LeakyRelu, 0.2f),
        LayerSpec::conv(5, 2 * b, 4 * b, 2, 2),
        LayerSpec::batch_norm(4 * b),
        LayerSpec::activation(Act::LeakyRelu, 0.2f),
        LayerSpec::conv_transpose(4, 4 * b, 2 * b, 2, 1),
        LayerSpec::batch_norm(2 * b),
        LayerSpec::activation(Act::LeakyRelu, 0.0f),
        LayerSpec::conv_transpose(4, 2 * b, b, 2, 1),
        LayerSpec::batch_norm(b),
        LayerSpec::activation(Act::LeakyRelu, 0.0f),
        LayerSpec::conv_transpose(4, b, input_channels, 2, 1),
        LayerSpec::activation(Act::Tanh),
    };
    return cfg;
}

NetworkConfig default_d_config(int input_channels, int base_width, int input_size) {
    const int b = base_width;
    NetworkConfig cfg;
    cfg.input_size = input_size;
    cfg.input_channels = input_channels;
    cfg.layers = {
        LayerSpec::conv(5, input_channels, b, 2, 2),
        LayerSpec::activation(Act::LeakyRelu, 0.2f),
        LayerSpec::conv(5, b, 2 * b, 2, 2),
        LayerSpec::batch_norm(2 * b),
        LayerSpec::activation(Act::LeakyRelu, 0.2f),
        LayerSpec::conv(5, 2 * b, 4 * b, 2, 2),
        LayerSpec::batch_norm(4 * b),
        LayerSpec::activation(Act::LeakyRelu, 0.2f),
        LayerSpec::conv(input_size / 8, 4 * b, 1, 1, 0),
        LayerSpec::activation(Act::Sigmoid),
    };
    return cfg;
}

namespace {

// Walks the layer stack symbolically; throws ConfigError on broken chains.
// Returns the output (channels, spatial size).
std::pair<int, int> propagate_shapes(const NetworkConfig& cfg) {
    int c = cfg.input_channels;
    int s = cfg.input_size;
    if (c < 1 || s < 1) throw ConfigError("network config: input size and channels must be positive");
    for (size_t i = 0; i < cfg.layers.size(); ++i) {
        const LayerSpec& l = cfg.layers[i];
        std::ostringstream at;
        at << "layer " << i;
        switch (l.kind) {
            case LayerKind::Conv: {
                if (l.in_channels != c)
                    throw ConfigError(at.str() + ": conv in_channels does not chain");
                if (l.stride < 1 || l.padding < 0 || l.kernel_h < 1 || l.kernel_w < 1)
                    throw ConfigError(at.str() + ": bad conv geometry");
                const int out = (s + 2 * l.padding - l.kernel_h) / l.stride + 1;
                if (l.kernel_h > s + 2 * l.padding || out < 1)
                    throw ConfigError(at.str() + ": conv collapses the spatial extent");
                c = l.out_channels;
                s = out;
                break;
            }
            case LayerKind::ConvTranspose: {
                if (l.in_channels != c)
                    throw ConfigError(at.str() + ": conv_transpose in_channels does not chain");
                const int out = (s - 1) * l.stride - 2 * l.padding + l.kernel_h;
                if (out < 1)
                    throw ConfigError(at.str() + ": conv_transpose output dimension not positive");
                c = l.out_channels;
                s = out;
                break;
            }
            case LayerKind::BatchNorm:
                if (l.channels != c)
                    throw ConfigError(at.str() + ": batch_norm channels do not chain");
                break;
            case LayerKind::Activation:
                break;
        }
    }
    return {c, s};
}

bool is_parametric(LayerKind k) {
    return k == LayerKind::Conv || k == LayerKind::ConvTranspose;
}

} // namespace

Network::Network(NetworkConfig config, NetRole role, Rng& rng)
    : config_(std::move(config)), role_(role) {
    auto [c, s] = propagate_shapes(config_);
    output_channels_ = c;
    output_size_ = s;

    for (size_t i = 0; i < config_.layers.size(); ++i) {
        const LayerSpec& l = config_.layers[i];
        Slot slot;
        std::ostringstream prefix;
        prefix << "l" << i;
        if (is_parametric(l.kind)) {
            // Conv kernels [Cout,Cin,kh,kw]; transpose kernels [Cin,Cout,kh,kw].
            std::vector<int> kshape = l.kind == LayerKind::Conv
                                          ? std::vector<int>{l.out_channels, l.in_channels, l.kernel_h, l.kernel_w}
                                          : std::vector<int>{l.in_channels, l.out_channels, l.kernel_h, l.kernel_w};
            Tensor<float> k(kshape);
            for (auto& v : k.values()) v = static_cast<float>(rng.normal(0.0, 0.02));
            k.set_requires_grad(true);
            slot.kernel = static_cast<int>(params_.size());
            params_.push_back(k);
            param_names_.push_back(prefix.str() + ".kernel");
        } else if (l.kind == LayerKind::BatchNorm) {
            Tensor<float> gamma = Tensor<float>::full({l.channels}, 1.0f);
            Tensor<float> beta({l.channels});
            gamma.set_requires_grad(true);
            beta.set_requires_grad(true);
            slot.gamma = static_cast<int>(params_.size());
            params_.push_back(gamma);
            param_names_.push_back(prefix.str() + ".gamma");
            slot.beta = static_cast<int>(params_.size());
            params_.push_back(beta);
            param_names_.push_back(prefix.str() + ".beta");
            slot.bn = static_cast<int>(bn_states_.size());
            bn_states_.emplace_back(l.channels);
        }
        slots_.push_back(slot);
    }
}

size_t Network::parameter_count() const {
    size_t n = 0;
    for (const auto& p : params_) n += p.numel();
    return n;
}

void Network::check_input(const Tensor<float>& x) const {
    if (x.rank() != 4) throw DimensionError("network: input must be 4-D (N,C,H,W)");
    if (x.dim(1) != config_.input_channels || x.dim(2) != config_.input_size ||
        x.dim(3) != config_.input_size)
        throw DimensionError("network: input shape does not match the configured input");
}

Tensor<float> Network::run(const Tensor<float>& x, bool train, Tape<float>* tape,
                           std::vector<BnState<float>>& bn) const {
    check_input(x);
    Tensor<float> cur = x;
    for (size_t i = 0; i < config_.layers.size(); ++i) {
        const LayerSpec& l = config_.layers[i];
        const Slot& slot = slots_[i];
        switch (l.kind) {
            case LayerKind::Conv:
                cur = conv2d(cur, params_[slot.kernel], l.stride, l.padding, tape);
                break;
            case LayerKind::ConvTranspose:
                cur = conv2d_transpose(cur, params_[slot.kernel], l.stride, l.padding, tape);
                break;
            case LayerKind::BatchNorm:
                cur = batch_norm(cur, params_[slot.gamma], params_[slot.beta], bn[slot.bn], train,
                                 0.9f, 1e-6f, tape);
                break;
            case LayerKind::Activation:
                cur = activation(cur, l.act, l.alpha, tape);
                break;
        }
    }
    return cur;
}

Tensor<float> Network::forward(const Tensor<float>& x, bool train, Tape<float>* tape) {
    return run(x, train, tape, bn_states_);
}

Tensor<float> Network::forward_eval(const Tensor<float>& x) const {
    return run(x, false, nullptr, bn_states_);
}

void Network::zero_grads() {
    for (auto& p : params_) p.zero_grad();
}

void Network::set_trainable(bool on) {
    for (auto& p : params_) p.set_requires_grad(on);
}

std::vector<NamedBuffer> Network::export_state() const {
    std::vector<NamedBuffer> out;
    for (size_t i = 0; i < params_.size(); ++i) {
        NamedBuffer b;
        b.name = param_names_[i];
        for (int d : params_[i].shape()) b.dims.push_back(static_cast<uint32_t>(d));
        b.data = params_[i].values();
        out.push_back(std::move(b));
    }
    for (size_t i = 0; i < slots_.size(); ++i) {
        if (slots_[i].bn < 0) continue;
        const BnState<float>& st = bn_states_[slots_[i].bn];
        std::ostringstream prefix;
        prefix << "l" << i;
        out.push_back({prefix.str() + ".running_mean",
                       {static_cast<uint32_t>(st.channels())},
                       st.mean});
        out.push_back({prefix.str() + ".running_var",
                       {static_cast<uint32_t>(st.channels())},
                       st.var});
    }
    return out;
}

void Network::import_state(const std::vector<NamedBuffer>& buffers) {
    const std::vector<NamedBuffer> expected = export_state();
    if (buffers.size() != expected.size())
        throw FormatError("network state: tensor count does not match the config");
    for (size_t i = 0; i < buffers.size(); ++i) {
        if (buffers[i].name != expected[i].name)
            throw FormatError("network state: unexpected tensor name " + buffers[i].name);
        if (buffers[i].dims != expected[i].dims)
            throw FormatError("network state: shape mismatch for " + buffers[i].name);
    }
    size_t at = 0;
    for (size_t i = 0; i < params_.size(); ++i, ++at) params_[i].values() = buffers[at].data;
    for (size_t i = 0; i < slots_.size(); ++i) {
        if (slots_[i].bn < 0) continue;
        bn_states_[slots_[i].bn].mean = buffers[at++].data;
        bn_states_[slots_[i].bn].var = buffers[at++].data;
    }
}

Network build_r(const NetworkConfig& config, Rng& rng) {
    auto [c, s] = propagate_shapes(config);
    if (c != config.input_channels || s != config.input_size)
        throw ConfigError("build_r: config is not shape-symmetric (output must match input)");

    // Every hidden conv must be followed by batch norm; the output conv is
    // exempt (no batch norm ahead of the tanh head).
    int last_parametric = -1;
    for (size_t i = 0; i < config.layers.size(); ++i)
        if (is_parametric(config.layers[i].kind)) last_parametric = static_cast<int>(i);
    for (size_t i = 0; i < config.layers.size(); ++i) {
        if (!is_parametric(config.layers[i].kind) || static_cast<int>(i) == last_parametric)
            continue;
        if (i + 1 >= config.layers.size() || config.layers[i + 1].kind != LayerKind::BatchNorm)
            throw ConfigError("build_r: every hidden conv must be followed by batch_norm");
    }
    if (config.layers.empty() || config.layers.back().kind != LayerKind::Activation ||
        config.layers.back().act != Act::Tanh)
        throw ConfigError("build_r: reconstructor must end with a tanh activation");

    return Network(config, NetRole::Reconstructor, rng);
}

Network build_r(const NetworkConfig& config, uint64_t seed) {
    Rng rng(seed);
    return build_r(config, rng);
}

Network build_d(const NetworkConfig& config, Rng& rng) {
    auto [c, s] = propagate_shapes(config);
    if (c != 1 || s != 1)
        throw ConfigError("build_d: discriminator must end in a single scalar per sample");
    if (config.layers.empty() || config.layers.back().kind != LayerKind::Activation ||
        config.layers.back().act != Act::Sigmoid)
        throw ConfigError("build_d: discriminator must end with a sigmoid activation");
    return Network(config, NetRole::Discriminator, rng);
}

Network build_d(const NetworkConfig& config, uint64_t seed) {
    Rng rng(seed);
    return build_d(config, rng);
}

Tensor<float> forward_r(Network& net, const Tensor<float>& x, bool train, Tape<float>* tape) {
    if (net.role() != NetRole::Reconstructor) throw UsageError("forward_r: network is not a reconstructor");
    return net.forward(x, train, tape);
}

Tensor<float> forward_r(const Network& net, const Tensor<float>& x) {
    if (net.role() != NetRole::Reconstructor) throw UsageError("forward_r: network is not a reconstructor");
    return net.forward_eval(x);
}

Tensor<float> forward_d(Network& net, const Tensor<float>& x, bool train, Tape<float>* tape) {
    if (net.role() != NetRole::Discriminator) throw UsageError("forward_d: network is not a discriminator");
    Tensor<float> out = net.forward(x, train, tape);
    return out.reshaped({out.dim(0), 1});
}

Tensor<float> forward_d(const Network& net, const Tensor<float>& x) {
    if (net.role() != NetRole::Discriminator) throw UsageError("forward_d: network is not a discriminator");
    Tensor<float> out = net.forward_eval(x);
    return out.reshaped({out.dim(0), 1});
}

} // namespace alocc
