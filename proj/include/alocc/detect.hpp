#pragma once

#include <vector>

#include "alocc/network.hpp"

namespace alocc {

enum class OccMode { Occ1, Occ2 };
const char* to_string(OccMode mode);

struct DetectionConfig {
    float tau = 0.5f;
    OccMode mode = OccMode::Occ2;
};

/// Throws ConfigError unless 0 < tau < 1.
void validate(const DetectionConfig& cfg);

enum class SampleLabel { Target, Novelty };

struct Verdict {
    SampleLabel label = SampleLabel::Novelty;
    float score = 0.0f;
    OccMode mode = OccMode::Occ2;
};

/// Target-likelihood of one sample [1,C,H,W]: OCC1 scores D(x), OCC2 scores
/// D(R(x)). Eval mode, no noise at test time.
float score(const Network& r, const Network& d, const Tensor<float>& x, OccMode mode);

/// Batched scoring of [N,C,H,W].
std::vector<float> score_batch(const Network& r, const Network& d, const Tensor<float>& x,
                               OccMode mode);

/// Target iff score > tau (strict: a score equal to tau is Novelty).
Verdict classify(float score, const DetectionConfig& cfg);

/// Frame score is the minimum over patch scores; the frame is Novelty iff
/// any patch classifies as Novelty.
Verdict frame_decision(const std::vector<float>& patch_scores, const DetectionConfig& cfg);

} // namespace alocc
