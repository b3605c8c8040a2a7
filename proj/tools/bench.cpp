// Benchmark: OpenMP kernels against the serial reference on training-sized
// shapes. Prints one line per kernel with both timings, the speedup and the
// max elementwise deviation.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "alocc/kernels.hpp"
#include "alocc/random.hpp"
#include "alocc/ref.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<double> random_vec(size_t n, alocc::Rng& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void bench_conv(int n, int cin, int cout, int h, int k, int stride, int pad, int repeats) {
    alocc::Rng rng(77);
    const auto x = random_vec(size_t(n) * cin * h * h, rng);
    const auto w = random_vec(size_t(cout) * cin * k * k, rng);

    int ho = 0, wo = 0;
    auto t0 = Clock::now();
    std::vector<double> serial;
    for (int i = 0; i < repeats; ++i)
        serial = alocc::ref::conv2d(x, n, cin, h, h, w, cout, k, k, stride, pad, ho, wo);
    const double t_serial = ms_since(t0) / repeats;

    std::vector<double> par(size_t(n) * cout * ho * wo);
    t0 = Clock::now();
    for (int i = 0; i < repeats; ++i)
        alocc::kern::conv_corr(x.data(), n, cin, h, h, w.data(), cout, k, k, stride, pad,
                               par.data(), ho, wo, false);
    const double t_par = ms_since(t0) / repeats;

    std::printf("conv2d     %dx%dx%dx%d k%d s%d  serial %8.2f ms   omp %8.2f ms   x%.2f   maxdiff %.2e\n",
                n, cin, h, h, k, stride, t_serial, t_par, t_serial / t_par,
                max_abs_diff(serial, par));
}

void bench_conv_transpose(int n, int cin, int cout, int h, int k, int stride, int pad,
                          int repeats) {
    alocc::Rng rng(78);
    const auto x = random_vec(size_t(n) * cin * h * h, rng);
    const auto w = random_vec(size_t(cin) * cout * k * k, rng);

    int ho = 0, wo = 0;
    auto t0 = Clock::now();
    std::vector<double> serial;
    for (int i = 0; i < repeats; ++i)
        serial = alocc::ref::conv2d_transpose(x, n, cin, h, h, w, cout, k, k, stride, pad, ho, wo);
    const double t_serial = ms_since(t0) / repeats;

    std::vector<double> par(size_t(n) * cout * ho * wo);
    t0 = Clock::now();
    for (int i = 0; i < repeats; ++i)
        alocc::kern::conv_adjoint(x.data(), n, cin, h, h, w.data(), cout, k, k, stride, pad,
                                  par.data(), ho, wo, false);
    const double t_par = ms_since(t0) / repeats;

    std::printf("conv2d_t   %dx%dx%dx%d k%d s%d  serial %8.2f ms   omp %8.2f ms   x%.2f   maxdiff %.2e\n",
                n, cin, h, h, k, stride, t_serial, t_par, t_serial / t_par,
                max_abs_diff(serial, par));
}

void bench_bn(int n, int c, int h, int repeats) {
    alocc::Rng rng(79);
    const auto x = random_vec(size_t(n) * c * h * h, rng);
    std::vector<double> gamma = random_vec(c, rng), beta = random_vec(c, rng);

    auto t0 = Clock::now();
    std::vector<double> serial;
    for (int i = 0; i < repeats; ++i)
        serial = alocc::ref::batch_norm_train(x, n, c, h * h, gamma, beta, 1e-6);
    const double t_serial = ms_since(t0) / repeats;

    std::vector<double> mean(c), var(c), par(x.size());
    t0 = Clock::now();
    for (int i = 0; i < repeats; ++i) {
        alocc::kern::bn_batch_stats(x.data(), n, c, h * h, mean.data(), var.data());
        alocc::kern::bn_apply(x.data(), n, c, h * h, mean.data(), var.data(), gamma.data(),
                              beta.data(), 1e-6, par.data());
    }
    const double t_par = ms_since(t0) / repeats;

    std::printf("batchnorm  %dx%dx%dx%d        serial %8.2f ms   omp %8.2f ms   x%.2f   maxdiff %.2e\n",
                n, c, h, h, t_serial, t_par, t_serial / t_par, max_abs_diff(serial, par));
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n\n");
#endif
    bench_conv(32, 1, 64, 32, 5, 2, 2, 5);
    bench_conv(32, 64, 128, 16, 5, 2, 2, 3);
    bench_conv(32, 128, 256, 8, 5, 2, 2, 3);
    bench_conv_transpose(32, 256, 128, 4, 4, 2, 1, 3);
    bench_conv_transpose(32, 128, 64, 8, 4, 2, 1, 3);
    bench_bn(32, 128, 16, 5);
    return 0;
}
