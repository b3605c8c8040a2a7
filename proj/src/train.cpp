#include "alocc/train.hpp"

#include <cmath>
#include <numeric>

namespace alocc {

void validate(const TrainConfig& cfg) {
    if (!(cfg.lambda > 0.0f)) throw ConfigError("train config: lambda must be > 0");
    if (cfg.sigma < 0.0f) throw ConfigError("train config: sigma must be >= 0");
    if (!(cfg.rho > 0.0f)) throw ConfigError("train config: rho must be > 0");
    if (!(cfg.learning_rate > 0.0f)) throw ConfigError("train config: learning rate must be > 0");
    if (cfg.batch_size < 1) throw ConfigError("train config: batch size must be >= 1");
    if (cfg.max_epochs < 0) throw ConfigError("train config: max epochs must be >= 0");
    if (cfg.eval_every < 1) throw ConfigError("train config: eval_every must be >= 1");
}

const char* to_string(StopReason r) {
    return r == StopReason::RhoReached ? "rho_reached" : "max_epochs";
}

namespace {

void check_batch(const Tensor<float>& clean) {
    if (!clean.defined() || clean.rank() != 4 || clean.dim(0) < 1)
        throw UsageError("training step: empty batch");
}

// X~ = X + eta, eta ~ N(0, sigma^2 I). sigma == 0 returns X unchanged.
Tensor<float> corrupt(const Tensor<float>& clean, float sigma, Rng& rng) {
    if (sigma == 0.0f) return clean;
    Tensor<float> noise = sample_gaussian<float>(clean.shape(), sigma, rng);
    Tensor<float> noisy(clean.shape());
    kern::axpy(clean.data(), noise.data(), 1.0f, noisy.data(), clean.numel());
    return noisy;
}

} // namespace

double d_step(Network& r, Network& d, const Tensor<float>& clean, float sigma,
              AdamState<float>& d_opt, Rng& rng) {
    check_batch(clean);
    const Tensor<float> noisy = corrupt(clean, sigma, rng);
    const Tensor<float> recon = forward_r(r, noisy, true, nullptr);

    Tape<float> tape;
    Tensor<float> s_real = forward_d(d, clean, true, &tape);
    Tensor<float> s_fake = forward_d(d, recon, true, &tape);
    Tensor<float> loss =
        add(bce_loss(s_real, 1, &tape), bce_loss(s_fake, 0, &tape), &tape);
    tape.backward(loss);
    adam_step(d.parameters(), d_opt);
    d.zero_grads();
    return static_cast<double>(loss.item());
}

std::pair<double, double> r_step(Network& r, Network& d, const Tensor<float>& clean, float sigma,
                                 float lambda, AdamState<float>& r_opt, Rng& rng) {
    check_batch(clean);
    const Tensor<float> noisy = corrupt(clean, sigma, rng);

    // D is frozen for this step; gradients still flow through it into R.
    d.set_trainable(false);
    Tape<float> tape;
    Tensor<float> recon = forward_r(r, noisy, true, &tape);
    Tensor<float> score = forward_d(d, recon, true, &tape);
    Tensor<float> adv = bce_loss(score, 1, &tape);
    Tensor<float> rec = mse_loss(clean, recon, &tape);
    Tensor<float> total = add(adv, scale(rec, lambda, &tape), &tape);
    tape.backward(total);
    adam_step(r.parameters(), r_opt);
    r.zero_grads();
    d.set_trainable(true);
    return {static_cast<double>(adv.item()), static_cast<double>(rec.item())};
}

TrainReport train(Network& r, Network& d, const Dataset& target, const TrainConfig& cfg,
                  std::ostream* log) {
    validate(cfg);
    if (target.size() == 0) throw UsageError("train: empty dataset");

    Rng rng(cfg.seed);
    AdamState<float> r_opt, d_opt;
    r_opt.lr = d_opt.lr = cfg.learning_rate;
    r_opt.beta1 = d_opt.beta1 = cfg.beta1;
    r_opt.beta2 = d_opt.beta2 = cfg.beta2;
    r_opt.init(r.parameters());
    d_opt.init(d.parameters());

    const double pixels_per_sample = static_cast<double>(target.sample_stride());
    std::vector<size_t> order(target.size());
    std::iota(order.begin(), order.end(), size_t(0));

    TrainReport report;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle(order, rng);
        double d_sum = 0.0, adv_sum = 0.0, rec_sum = 0.0;
        size_t seen = 0;
        for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const size_t end = std::min(order.size(), start + cfg.batch_size);
            const std::vector<size_t> idx(order.begin() + start, order.begin() + end);
            const Tensor<float> batch = target.batch(idx);
            const size_t bsz = idx.size();

            d_sum += d_step(r, d, batch, cfg.sigma, d_opt, rng) * static_cast<double>(bsz);
            auto [adv, rec] = r_step(r, d, batch, cfg.sigma, cfg.lambda, r_opt, rng);
            adv_sum += adv * static_cast<double>(bsz);
            rec_sum += rec * static_cast<double>(bsz);
            seen += bsz;
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.d_loss = d_sum / static_cast<double>(seen);
        rec.r_adv_loss = adv_sum / static_cast<double>(seen);
        rec.recon_loss = rec_sum / static_cast<double>(seen);
        if (!std::isfinite(rec.d_loss) || !std::isfinite(rec.r_adv_loss) ||
            !std::isfinite(rec.recon_loss))
            throw NumericError("train: non-finite loss (training diverged)");
        report.epochs.push_back(rec);

        if (log && (epoch % cfg.eval_every == 0 || epoch == cfg.max_epochs))
            *log << "epoch " << epoch << "  d_loss " << rec.d_loss << "  r_adv " << rec.r_adv_loss
                 << "  recon " << rec.recon_loss << "\n";

        if (rec.recon_loss / pixels_per_sample < static_cast<double>(cfg.rho)) {
            report.stop_reason = StopReason::RhoReached;
            return report;
        }
    }
    report.stop_reason = StopReason::MaxEpochs;
    return report;
}

} // namespace alocc
