#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "alocc/data.hpp"
#include "alocc/network.hpp"
#include "alocc/optim.hpp"

namespace alocc {

struct TrainConfig {
    float lambda = 0.4f; // reconstruction weight in the joint loss
    float sigma = 0.1f;  // stddev of the gaussian corruption on R's input
    float rho = 0.05f;   // per-pixel stopping threshold on reconstruction error
    float learning_rate = 2e-4f;
    float beta1 = 0.5f;
    float beta2 = 0.999f;
    int batch_size = 64;
    int max_epochs = 25;
    uint64_t seed = 1;
    int eval_every = 1; // progress-reporting interval, in epochs
};

/// Throws ConfigError on out-of-range hyperparameters (lambda must be > 0,
/// sigma >= 0, rho > 0, batch size >= 1).
void validate(const TrainConfig& cfg);

struct EpochRecord {
    int epoch = 0;
    double d_loss = 0.0;
    double r_adv_loss = 0.0;
    double recon_loss = 0.0; // batch-mean per-sample ||X - X'||^2
};

enum class StopReason { RhoReached, MaxEpochs };
const char* to_string(StopReason r);

struct TrainReport {
    std::vector<EpochRecord> epochs;
    StopReason stop_reason = StopReason::MaxEpochs;
    int epochs_run() const { return static_cast<int>(epochs.size()); }
};

/// One Adam update of D against bce(D(X),1) + bce(D(R(X~)),0) where
/// X~ = X + N(0, sigma^2). R runs without recording; its parameters are
/// untouched. Returns the loss value before the update.
double d_step(Network& r, Network& d, const Tensor<float>& clean, float sigma,
              AdamState<float>& d_opt, Rng& rng);

/// One Adam update of R against bce(D(R(X~)),1) + lambda * ||X - R(X~)||^2
/// (non-saturating adversarial form). D's parameters are untouched. Returns
/// (adversarial loss, reconstruction loss).
std::pair<double, double> r_step(Network& r, Network& d, const Tensor<float>& clean, float sigma,
                                 float lambda, AdamState<float>& r_opt, Rng& rng);

/// Alternates d_step/r_step (1:1) over shuffled minibatches until the
/// epoch-mean per-pixel reconstruction error drops below rho or max_epochs
/// is reached. Deterministic given the config seed.
TrainReport train(Network& r, Network& d, const Dataset& target, const TrainConfig& cfg,
                  std::ostream* log = nullptr);

} // namespace alocc
