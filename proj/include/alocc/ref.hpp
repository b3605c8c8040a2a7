#pragma once

#include <vector>

// Serial reference implementations, deliberately naive and written from the
// operation definitions rather than sharing code with the parallel kernels.
// Used by the tests as independent oracles and by tools/bench for the
// serial-vs-OpenMP comparison. Not linked into the main library.

namespace alocc::ref {

// Quadruple-loop sliding-window cross-correlation.
std::vector<double> conv2d(const std::vector<double>& x, int n, int cin, int h, int w,
                           const std::vector<double>& k, int cout, int kh, int kw,
                           int stride, int pad, int& ho, int& wo);

// Scatter-form transposed convolution: every input pixel stamps the kernel
// into the output. Kernel layout [Cin,Cout,kh,kw].
std::vector<double> conv2d_transpose(const std::vector<double>& x, int n, int cin, int h, int w,
                                     const std::vector<double>& k, int cout, int kh, int kw,
                                     int stride, int pad, int& ho, int& wo);

// Train-mode batch norm straight from the formulas (biased variance).
std::vector<double> batch_norm_train(const std::vector<double>& x, int n, int c, int hw,
                                     const std::vector<double>& gamma,
                                     const std::vector<double>& beta, double eps);

// One Adam update on a single scalar parameter; keeps its own state.
struct ScalarAdam {
    double lr, beta1, beta2, eps;
    double m = 0.0, v = 0.0;
    long t = 0;
    double step(double w, double g);
};

// O(n^2) pairwise AUC: P(inlier > outlier) + 0.5 * P(equal).
double auc_pairwise(const std::vector<double>& scores, const std::vector<int>& is_inlier);

// EER from a dense threshold grid; returns (FPR+FNR)/2 at the grid point
// minimizing |FPR-FNR|.
double eer_grid(const std::vector<double>& scores, const std::vector<int>& is_inlier,
                int grid_points);

// F1 by direct confusion-matrix recount at threshold tau (positive = inlier,
// predicted positive iff score > tau).
double f1_recount(const std::vector<double>& scores, const std::vector<int>& is_inlier,
                  double tau);

} // namespace alocc::ref
