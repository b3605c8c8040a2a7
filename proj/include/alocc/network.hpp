#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "alocc/ops.hpp"
#include "alocc/random.hpp"
#include "alocc/tensor.hpp"

namespace alocc {

enum class LayerKind { Conv, ConvTranspose, BatchNorm, Activation };

/// One primitive layer. Only the fields relevant to the kind are read;
/// there is deliberately no pooling kind.
struct LayerSpec {
    LayerKind kind = LayerKind::Conv;
    int kernel_h = 0, kernel_w = 0;
    int in_channels = 0, out_channels = 0;
    int stride = 1, padding = 0;
    int channels = 0;        // BatchNorm
    Act act = Act::Sigmoid;  // Activation
    float alpha = 0.2f;      // leaky_relu slope

    static LayerSpec conv(int k, int in_ch, int out_ch, int stride, int pad);
    static LayerSpec conv_transpose(int k, int in_ch, int out_ch, int stride, int pad);
    static LayerSpec batch_norm(int channels);
    static LayerSpec activation(Act kind, float alpha = 0.2f);
};

struct NetworkConfig {
    int input_size = 32;
    int input_channels = 1;
    std::vector<LayerSpec> layers;
};

/// DCGAN-style defaults for a 32x32 input: three stride-2 5x5 encoder convs
/// (channels base, 2*base, 4*base) mirrored by three stride-2 4x4 upsampling
/// convs, batch norm on every hidden conv, tanh output head.
NetworkConfig default_r_config(int input_channels = 1, int base_width = 64, int input_size = 32);

/// Three stride-2 5x5 convs (no batch norm on the first), then a full-extent
/// conv to a single unit with a sigmoid head.
NetworkConfig default_d_config(int input_channels = 1, int base_width = 64, int input_size = 32);

enum class NetRole { Reconstructor, Discriminator };

struct NamedBuffer {
    std::string name;
    std::vector<uint32_t> dims;
    std::vector<float> data;
};

/// An instantiated network: config plus parameter tensors (kernels, gammas,
/// betas) and per-layer batch-norm running statistics.
class Network {
public:
    Network() = default;
    Network(NetworkConfig config, NetRole role, Rng& rng);

    const NetworkConfig& config() const { return config_; }
    NetRole role() const { return role_; }
    int output_channels() const { return output_channels_; }
    int output_size() const { return output_size_; }

    std::vector<Tensor<float>>& parameters() { return params_; }
    const std::vector<Tensor<float>>& parameters() const { return params_; }
    size_t parameter_count() const;

    /// Runs the layer stack. Train mode uses batch statistics and updates the
    /// running stats; a non-null tape records backward rules.
    Tensor<float> forward(const Tensor<float>& x, bool train, Tape<float>* tape);
    /// Eval path: running statistics, no recording, no state mutation.
    Tensor<float> forward_eval(const Tensor<float>& x) const;

    void zero_grads();
    /// Toggles gradient buffers on every parameter (used to freeze one
    /// network while the other one is updated).
    void set_trainable(bool on);

    /// Parameters and running statistics as named flat buffers, in a stable
    /// order ("l<i>.kernel", "l<i>.gamma", "l<i>.beta", "l<i>.running_mean",
    /// "l<i>.running_var").
    std::vector<NamedBuffer> export_state() const;
    void import_state(const std::vector<NamedBuffer>& buffers);

private:
    struct Slot {
        int kernel = -1;
        int gamma = -1;
        int beta = -1;
        int bn = -1;
    };

    Tensor<float> run(const Tensor<float>& x, bool train, Tape<float>* tape,
                      std::vector<BnState<float>>& bn) const;
    void check_input(const Tensor<float>& x) const;

    NetworkConfig config_;
    NetRole role_ = NetRole::Reconstructor;
    int output_channels_ = 0;
    int output_size_ = 0;
    std::vector<Tensor<float>> params_;
    std::vector<std::string> param_names_;
    std::vector<Slot> slots_;
    mutable std::vector<BnState<float>> bn_states_; // written only in train mode
};

/// Validates the config (shape-symmetric encoder-decoder, batch norm after
/// every hidden conv, tanh head) and builds an initialized reconstructor.
Network build_r(const NetworkConfig& config, uint64_t seed);
Network build_r(const NetworkConfig& config, Rng& rng);

/// Validates the config (single sigmoid unit per sample) and builds an
/// initialized discriminator.
Network build_d(const NetworkConfig& config, uint64_t seed);
Network build_d(const NetworkConfig& config, Rng& rng);

/// Reconstruction X' of x; same shape as x.
Tensor<float> forward_r(Network& net, const Tensor<float>& x, bool train, Tape<float>* tape);
Tensor<float> forward_r(const Network& net, const Tensor<float>& x);

/// Target-likelihood scores, shape [N,1], entries in (0,1).
Tensor<float> forward_d(Network& net, const Tensor<float>& x, bool train, Tape<float>* tape);
Tensor<float> forward_d(const Network& net, const Tensor<float>& x);

} // namespace alocc
