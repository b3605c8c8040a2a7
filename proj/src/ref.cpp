#include "alocc/ref.hpp"

#include <algorithm>
#include <cmath>

namespace alocc::ref {

std::vector<double> conv2d(const std::vector<double>& x, int n, int cin, int h, int w,
                           const std::vector<double>& k, int cout, int kh, int kw,
                           int stride, int pad, int& ho, int& wo) {
    ho = (h + 2 * pad - kh) / stride + 1;
    wo = (w + 2 * pad - kw) / stride + 1;
    std::vector<double> out(static_cast<size_t>(n) * cout * ho * wo, 0.0);
    for (int nn = 0; nn < n; ++nn)
        for (int a = 0; a < cout; ++a)
            for (int i = 0; i < ho; ++i)
                for (int j = 0; j < wo; ++j) {
                    double acc = 0.0;
                    for (int b = 0; b < cin; ++b)
                        for (int u = 0; u < kh; ++u)
                            for (int v = 0; v < kw; ++v) {
                                const int y = i * stride + u - pad;
                                const int xx = j * stride + v - pad;
                                if (y < 0 || y >= h || xx < 0 || xx >= w) continue;
                                const double xv = x[((static_cast<size_t>(nn) * cin + b) * h + y) * w + xx];
                                const double kv = k[((static_cast<size_t>(a) * cin + b) * kh + u) * kw + v];
                                acc += xv * kv;
                            }
                    out[((static_cast<size_t>(nn) * cout + a) * ho + i) * wo + j] = acc;
                }
    return out;
}

std::vector<double> conv2d_transpose(const std::vector<double>& x, int n, int cin, int h, int w,
                                     const std::vector<double>& k, int cout, int kh, int kw,
                                     int stride, int pad, int& ho, int& wo) {
    ho = (h - 1) * stride - 2 * pad + kh;
    wo = (w - 1) * stride - 2 * pad + kw;
    std::vector<double> out(static_cast<size_t>(n) * cout * ho * wo, 0.0);
    for (int nn = 0; nn < n; ++nn)
        for (int b = 0; b < cin; ++b)
            for (int i = 0; i < h; ++i)
                for (int j = 0; j < w; ++j) {
                    const double xv = x[((static_cast<size_t>(nn) * cin + b) * h + i) * w + j];
                    for (int a = 0; a < cout; ++a)
                        for (int u = 0; u < kh; ++u)
                            for (int v = 0; v < kw; ++v) {
                                const int y = i * stride + u - pad;
                                const int xx = j * stride + v - pad;
                                if (y < 0 || y >= ho || xx < 0 || xx >= wo) continue;
                                const double kv = k[((static_cast<size_t>(b) * cout + a) * kh + u) * kw + v];
                                out[((static_cast<size_t>(nn) * cout + a) * ho + y) * wo + xx] += xv * kv;
                            }
                }
    return out;
}

std::vector<double> batch_norm_train(const std::vector<double>& x, int n, int c, int hw,
                                     const std::vector<double>& gamma,
                                     const std::vector<double>& beta, double eps) {
    std::vector<double> out(x.size());
    const double count = static_cast<double>(n) * hw;
    for (int ch = 0; ch < c; ++ch) {
        double mean = 0.0;
        for (int nn = 0; nn < n; ++nn)
            for (int i = 0; i < hw; ++i)
                mean += x[(static_cast<size_t>(nn) * c + ch) * hw + i];
        mean /= count;
        double var = 0.0;
        for (int nn = 0; nn < n; ++nn)
            for (int i = 0; i < hw; ++i) {
                const double d = x[(static_cast<size_t>(nn) * c + ch) * hw + i] - mean;
                var += d * d;
            }
        var /= count;
        const double inv = 1.0 / std::sqrt(var + eps);
        for (int nn = 0; nn < n; ++nn)
            for (int i = 0; i < hw; ++i) {
                const size_t at = (static_cast<size_t>(nn) * c + ch) * hw + i;
                out[at] = gamma[ch] * (x[at] - mean) * inv + beta[ch];
            }
    }
    return out;
}

double ScalarAdam::step(double w, double g) {
    t += 1;
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g * g;
    const double mhat = m / (1.0 - std::pow(beta1, t));
    const double vhat = v / (1.0 - std::pow(beta2, t));
    return w - lr * mhat / (std::sqrt(vhat) + eps);
}

double auc_pairwise(const std::vector<double>& scores, const std::vector<int>& is_inlier) {
    double wins = 0.0;
    long pairs = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (!is_inlier[i]) continue;
        for (size_t j = 0; j < scores.size(); ++j) {
            if (is_inlier[j]) continue;
            pairs += 1;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

double eer_grid(const std::vector<double>& scores, const std::vector<int>& is_inlier,
                int grid_points) {
    const auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
    const double lo = *mn - 1e-9, hi = *mx + 1e-9;
    long n_in = 0, n_out = 0;
    for (int t : is_inlier) (t ? n_in : n_out) += 1;

    double best_gap = 2.0, best_eer = 0.0;
    for (int g = 0; g <= grid_points; ++g) {
        const double tau = lo + (hi - lo) * g / grid_points;
        long fp = 0, fn = 0;
        for (size_t i = 0; i < scores.size(); ++i) {
            const bool pred_target = scores[i] > tau;
            if (is_inlier[i] && !pred_target) fn += 1;
            if (!is_inlier[i] && pred_target) fp += 1;
        }
        const double fpr = static_cast<double>(fp) / n_out;
        const double fnr = static_cast<double>(fn) / n_in;
        const double gap = std::abs(fpr - fnr);
        if (gap < best_gap) {
            best_gap = gap;
            best_eer = 0.5 * (fpr + fnr);
        }
    }
    return best_eer;
}

double f1_recount(const std::vector<double>& scores, const std::vector<int>& is_inlier,
                  double tau) {
    long tp = 0, fp = 0, fn = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] > tau;
        if (pred && is_inlier[i]) tp += 1;
        if (pred && !is_inlier[i]) fp += 1;
        if (!pred && is_inlier[i]) fn += 1;
    }
    if (tp == 0) return 0.0;
    const double p = static_cast<double>(tp) / (tp + fp);
    const double r = static_cast<double>(tp) / (tp + fn);
    return 2.0 * p * r / (p + r);
}

} // namespace alocc::ref
