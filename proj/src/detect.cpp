#include "alocc/detect.hpp"

#include <algorithm>

namespace alocc {

const char* to_string(OccMode mode) { return mode == OccMode::Occ1 ? "occ1" : "occ2"; }

void validate(const DetectionConfig& cfg) {
    if (!(cfg.tau > 0.0f && cfg.tau < 1.0f))
        throw ConfigError("detection config: tau must lie strictly in (0,1)");
}

std::vector<float> score_batch(const Network& r, const Network& d, const Tensor<float>& x,
                               OccMode mode) {
    Tensor<float> scores;
    if (mode == OccMode::Occ1) {
        scores = forward_d(d, x);
    } else {
        const Tensor<float> recon = forward_r(r, x);
        scores = forward_d(d, recon);
    }
    return scores.values();
}

float score(const Network& r, const Network& d, const Tensor<float>& x, OccMode mode) {
    if (x.rank() != 4 || x.dim(0) != 1)
        throw DimensionError("score: expected a single sample [1,C,H,W]");
    return score_batch(r, d, x, mode)[0];
}

Verdict classify(float score, const DetectionConfig& cfg) {
    Verdict v;
    v.score = score;
    v.mode = cfg.mode;
    v.label = score > cfg.tau ? SampleLabel::Target : SampleLabel::Novelty;
    return v;
}

Verdict frame_decision(const std::vector<float>& patch_scores, const DetectionConfig& cfg) {
    if (patch_scores.empty()) throw UsageError("frame_decision: no patch scores");
    const float frame_score = *std::min_element(patch_scores.begin(), patch_scores.end());
    return classify(frame_score, cfg);
}

} // namespace alocc
