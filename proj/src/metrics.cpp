#include "alocc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace alocc {

namespace {

void check_nonempty(const LabeledScores& s) {
    if (s.score.size() != s.inlier.size())
        throw UsageError("metrics: score/truth lists differ in length");
    if (s.score.empty()) throw UsageError("metrics: empty score set");
}

void check_both_classes(const LabeledScores& s) {
    check_nonempty(s);
    if (s.count_inliers() == 0 || s.count_outliers() == 0)
        throw UsageError("metrics: both classes required");
}

} // namespace

long LabeledScores::count_inliers() const {
    return std::count(inlier.begin(), inlier.end(), uint8_t(1));
}
long LabeledScores::count_outliers() const {
    return static_cast<long>(inlier.size()) - count_inliers();
}

MetricReport confusion_at(const LabeledScores& scores, double tau) {
    check_nonempty(scores);
    MetricReport r;
    r.tau = tau;
    for (size_t i = 0; i < scores.size(); ++i) {
        const bool pred_target = scores.score[i] > tau;
        const bool truth_target = scores.inlier[i] != 0;
        if (pred_target && truth_target) r.tp += 1;
        else if (pred_target && !truth_target) r.fp += 1;
        else if (!pred_target && truth_target) r.fn += 1;
        else r.tn += 1;
    }
    if (r.tp > 0) {
        const double p = static_cast<double>(r.tp) / (r.tp + r.fp);
        const double rec = static_cast<double>(r.tp) / (r.tp + r.fn);
        r.f1 = 2.0 * p * rec / (p + rec);
    }
    return r;
}

double f1(const LabeledScores& scores, double tau, bool outlier_positive) {
    if (!outlier_positive) return confusion_at(scores, tau).f1;
    // Swap the class convention: positive = outlier, predicted iff score <= tau.
    check_nonempty(scores);
    long tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        const bool pred_out = !(scores.score[i] > tau);
        const bool truth_out = scores.inlier[i] == 0;
        if (pred_out && truth_out) tp += 1;
        else if (pred_out && !truth_out) fp += 1;
        else if (!pred_out && truth_out) fn += 1;
    }
    if (tp == 0) return 0.0;
    const double p = static_cast<double>(tp) / (tp + fp);
    const double r = static_cast<double>(tp) / (tp + fn);
    return 2.0 * p * r / (p + r);
}

double roc_auc(const LabeledScores& scores) {
    check_both_classes(scores);
    const size_t n = scores.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t(0));
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores.score[a] < scores.score[b]; });

    // Average ranks over tie groups, then the Mann-Whitney statistic.
    double inlier_rank_sum = 0.0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && scores.score[order[j + 1]] == scores.score[order[i]]) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (size_t k = i; k <= j; ++k)
            if (scores.inlier[order[k]]) inlier_rank_sum += avg_rank;
        i = j + 1;
    }
    const double n_in = static_cast<double>(scores.count_inliers());
    const double n_out = static_cast<double>(scores.count_outliers());
    return (inlier_rank_sum - n_in * (n_in + 1.0) / 2.0) / (n_in * n_out);
}

double eer(const LabeledScores& scores) {
    check_both_classes(scores);
    const long n_in = scores.count_inliers();
    const long n_out = scores.count_outliers();

    // Operating points for tau = -inf then each distinct score ascending.
    // Predicted target iff score > tau, so FPR falls from 1 while FNR rises
    // from 0; the FPR - FNR sign change brackets the EER.
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), size_t(0));
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores.score[a] < scores.score[b]; });

    double prev_fpr = 1.0, prev_fnr = 0.0;
    long fn = 0, tn = 0;
    size_t i = 0;
    while (i < scores.size()) {
        size_t j = i;
        while (j + 1 < scores.size() &&
               scores.score[order[j + 1]] == scores.score[order[i]])
            ++j;
        for (size_t k = i; k <= j; ++k) {
            if (scores.inlier[order[k]]) fn += 1;
            else tn += 1;
        }
        const double fpr = static_cast<double>(n_out - tn) / n_out;
        const double fnr = static_cast<double>(fn) / n_in;
        const double d_prev = prev_fpr - prev_fnr;
        const double d_cur = fpr - fnr;
        if (d_prev >= 0.0 && d_cur <= 0.0) {
            const double denom = d_prev - d_cur;
            const double t = denom > 0.0 ? d_prev / denom : 0.0;
            return prev_fnr + t * (fnr - prev_fnr);
        }
        prev_fpr = fpr;
        prev_fnr = fnr;
        i = j + 1;
    }
    // Sweep exhausted at (0, 1): the crossing sits at the final point.
    return prev_fnr;
}

double best_f1_tau(const LabeledScores& scores) {
    check_nonempty(scores);
    std::vector<double> cand(scores.score.begin(), scores.score.end());
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    // Below-minimum candidate covers the predict-everything-target point.
    cand.insert(cand.begin(), cand.front() - 1.0);

    double best_tau = cand.front();
    double best = -1.0;
    for (double tau : cand) {
        const double v = confusion_at(scores, tau).f1;
        if (v > best) {
            best = v;
            best_tau = tau;
        }
    }
    return best_tau;
}

MetricReport evaluate(const LabeledScores& scores, std::optional<double> tau) {
    const double t = tau.has_value() ? *tau : best_f1_tau(scores);
    MetricReport r = confusion_at(scores, t);
    r.auc = roc_auc(scores);
    r.eer = eer(scores);
    return r;
}

} // namespace alocc
