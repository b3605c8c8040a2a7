#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "alocc/error.hpp"

namespace alocc {

/// Parallel score/truth lists for threshold-free evaluation.
struct LabeledScores {
    std::vector<double> score;
    std::vector<uint8_t> inlier; // 1 = inlier (target), 0 = outlier

    void push(double s, bool is_inlier) {
        score.push_back(s);
        inlier.push_back(is_inlier ? 1 : 0);
    }
    size_t size() const { return score.size(); }
    long count_inliers() const;
    long count_outliers() const;
};

struct MetricReport {
    double tau = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
    double eer = 0.0;
    long tp = 0, fp = 0, tn = 0, fn = 0;
};

/// F1 with the inlier (target) class positive by default; a sample is
/// predicted positive iff score > tau (strict). Returns 0 when
/// precision + recall == 0.
double f1(const LabeledScores& scores, double tau, bool outlier_positive = false);

/// Confusion counts at tau plus the F1 derived from them.
MetricReport confusion_at(const LabeledScores& scores, double tau);

/// Rank-statistic AUC with ties averaged:
/// P(score_inlier > score_outlier) + 0.5 * P(equal).
double roc_auc(const LabeledScores& scores);

/// Equal error rate: the FPR == FNR point of the threshold sweep, linearly
/// interpolated between adjacent ROC points.
double eer(const LabeledScores& scores);

/// Threshold maximizing F1 over the sweep of observed score values (the
/// all-target operating point included). Ties keep the lowest threshold.
double best_f1_tau(const LabeledScores& scores);

/// Full report; tau defaults to best_f1_tau when not supplied.
MetricReport evaluate(const LabeledScores& scores, std::optional<double> tau = std::nullopt);

} // namespace alocc
