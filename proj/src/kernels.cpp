#include "alocc/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace alocc::kern {

template <class T>
void conv_corr(const T* in, int n, int cin, int h, int w,
               const T* weight, int cout, int kh, int kw,
               int stride, int pad,
               T* out, int ho, int wo, bool accumulate) {
    const long hw = static_cast<long>(h) * w;
    const long howo = static_cast<long>(ho) * wo;
    const long ksz = static_cast<long>(kh) * kw;

#pragma omp parallel for collapse(2) schedule(static)
    for (int nn = 0; nn < n; ++nn) {
        for (int a = 0; a < cout; ++a) {
            const T* wbase = weight + static_cast<long>(a) * cin * ksz;
            T* obase = out + (static_cast<long>(nn) * cout + a) * howo;
            for (int i = 0; i < ho; ++i) {
                for (int j = 0; j < wo; ++j) {
                    T acc = accumulate ? obase[i * wo + j] : T(0);
                    const int y0 = i * stride - pad;
                    const int x0 = j * stride - pad;
                    for (int b = 0; b < cin; ++b) {
                        const T* xb = in + (static_cast<long>(nn) * cin + b) * hw;
                        const T* wb = wbase + static_cast<long>(b) * ksz;
                        for (int u = 0; u < kh; ++u) {
                            const int y = y0 + u;
                            if (y < 0 || y >= h) continue;
                            const T* xrow = xb + static_cast<long>(y) * w;
                            const T* wrow = wb + static_cast<long>(u) * kw;
                            for (int v = 0; v < kw; ++v) {
                                const int x = x0 + v;
                                if (x < 0 || x >= w) continue;
                                acc += xrow[x] * wrow[v];
                            }
                        }
                    }
                    obase[i * wo + j] = acc;
                }
            }
        }
    }
}

template <class T>
void conv_adjoint(const T* in, int n, int cin, int h, int w,
                  const T* weight, int cout, int kh, int kw,
                  int stride, int pad,
                  T* out, int ho, int wo, bool accumulate) {
    const long hw = static_cast<long>(h) * w;
    const long howo = static_cast<long>(ho) * wo;

#pragma omp parallel for collapse(2) schedule(static)
    for (int nn = 0; nn < n; ++nn) {
        for (int b = 0; b < cout; ++b) {
            T* obase = out + (static_cast<long>(nn) * cout + b) * howo;
            for (int y = 0; y < ho; ++y) {
                for (int x = 0; x < wo; ++x) {
                    T acc = accumulate ? obase[y * wo + x] : T(0);
                    for (int u = 0; u < kh; ++u) {
                        const int ti = y + pad - u;
                        if (ti < 0 || ti % stride != 0) continue;
                        const int i = ti / stride;
                        if (i >= h) continue;
                        for (int v = 0; v < kw; ++v) {
                            const int tj = x + pad - v;
                            if (tj < 0 || tj % stride != 0) continue;
                            const int j = tj / stride;
                            if (j >= w) continue;
                            for (int a = 0; a < cin; ++a) {
                                const T g = in[(static_cast<long>(nn) * cin + a) * hw + i * w + j];
                                const T wv = weight[((static_cast<long>(a) * cout + b) * kh + u) * kw + v];
                                acc += g * wv;
                            }
                        }
                    }
                    obase[y * wo + x] = acc;
                }
            }
        }
    }
}

template <class T>
void conv_wgrad(const T* g, int n, int ca, int hg, int wg,
                const T* x, int cb, int hx, int wx,
                int kh, int kw, int stride, int pad,
                T* dw, bool accumulate) {
    const long ghw = static_cast<long>(hg) * wg;
    const long xhw = static_cast<long>(hx) * wx;

#pragma omp parallel for collapse(2) schedule(static)
    for (int a = 0; a < ca; ++a) {
        for (int b = 0; b < cb; ++b) {
            for (int u = 0; u < kh; ++u) {
                for (int v = 0; v < kw; ++v) {
                    T acc = T(0);
                    for (int nn = 0; nn < n; ++nn) {
                        const T* gb = g + (static_cast<long>(nn) * ca + a) * ghw;
                        const T* xb = x + (static_cast<long>(nn) * cb + b) * xhw;
                        for (int i = 0; i < hg; ++i) {
                            const int y = i * stride + u - pad;
                            if (y < 0 || y >= hx) continue;
                            const T* grow = gb + static_cast<long>(i) * wg;
                            const T* xrow = xb + static_cast<long>(y) * wx;
                            for (int j = 0; j < wg; ++j) {
                                const int xq = j * stride + v - pad;
                                if (xq < 0 || xq >= wx) continue;
                                acc += grow[j] * xrow[xq];
                            }
                        }
                    }
                    T* slot = dw + ((static_cast<long>(a) * cb + b) * kh + u) * kw + v;
                    *slot = accumulate ? *slot + acc : acc;
                }
            }
        }
    }
}

template <class T>
void bn_batch_stats(const T* x, int n, int c, int hw, T* mean, T* var) {
    const long chw = static_cast<long>(c) * hw;
    const double count = static_cast<double>(n) * hw;

#pragma omp parallel for schedule(static)
    for (int ch = 0; ch < c; ++ch) {
        double s = 0.0;
        for (int nn = 0; nn < n; ++nn) {
            const T* row = x + nn * chw + static_cast<long>(ch) * hw;
            for (int k = 0; k < hw; ++k) s += static_cast<double>(row[k]);
        }
        const double m = s / count;
        double sq = 0.0;
        for (int nn = 0; nn < n; ++nn) {
            const T* row = x + nn * chw + static_cast<long>(ch) * hw;
            for (int k = 0; k < hw; ++k) {
                const double d = static_cast<double>(row[k]) - m;
                sq += d * d;
            }
        }
        mean[ch] = static_cast<T>(m);
        var[ch] = static_cast<T>(sq / count);
    }
}

template <class T>
void bn_apply(const T* x, int n, int c, int hw,
              const T* mean, const T* var, const T* gamma, const T* beta,
              T eps, T* y) {
    const long chw = static_cast<long>(c) * hw;

#pragma omp parallel for collapse(2) schedule(static)
    for (int nn = 0; nn < n; ++nn) {
        for (int ch = 0; ch < c; ++ch) {
            const T inv = T(1) / std::sqrt(var[ch] + eps);
            const T g = gamma[ch], b = beta[ch], m = mean[ch];
            const T* xr = x + nn * chw + static_cast<long>(ch) * hw;
            T* yr = y + nn * chw + static_cast<long>(ch) * hw;
            for (int k = 0; k < hw; ++k) yr[k] = g * (xr[k] - m) * inv + b;
        }
    }
}

template <class T>
void bn_backward_train(const T* x, const T* gy, int n, int c, int hw,
                       const T* mean, const T* var, const T* gamma, T eps,
                       T* dx, T* dgamma, T* dbeta) {
    const long chw = static_cast<long>(c) * hw;
    const double count = static_cast<double>(n) * hw;

#pragma omp parallel for schedule(static)
    for (int ch = 0; ch < c; ++ch) {
        const double m = static_cast<double>(mean[ch]);
        const double inv = 1.0 / std::sqrt(static_cast<double>(var[ch]) + static_cast<double>(eps));
        double sum_gy = 0.0, sum_gy_xhat = 0.0;
        for (int nn = 0; nn < n; ++nn) {
            const T* xr = x + nn * chw + static_cast<long>(ch) * hw;
            const T* gr = gy + nn * chw + static_cast<long>(ch) * hw;
            for (int k = 0; k < hw; ++k) {
                const double xhat = (static_cast<double>(xr[k]) - m) * inv;
                sum_gy += static_cast<double>(gr[k]);
                sum_gy_xhat += static_cast<double>(gr[k]) * xhat;
            }
        }
        if (dgamma) dgamma[ch] += static_cast<T>(sum_gy_xhat);
        if (dbeta) dbeta[ch] += static_cast<T>(sum_gy);
        if (!dx) continue;
        const double g = static_cast<double>(gamma[ch]);
        for (int nn = 0; nn < n; ++nn) {
            const T* xr = x + nn * chw + static_cast<long>(ch) * hw;
            const T* gr = gy + nn * chw + static_cast<long>(ch) * hw;
            T* dr = dx + nn * chw + static_cast<long>(ch) * hw;
            for (int k = 0; k < hw; ++k) {
                const double xhat = (static_cast<double>(xr[k]) - m) * inv;
                const double t = static_cast<double>(gr[k]) - sum_gy / count - xhat * sum_gy_xhat / count;
                dr[k] += static_cast<T>(g * inv * t);
            }
        }
    }
}

template <class T>
void bn_backward_eval(const T* x, const T* gy, int n, int c, int hw,
                      const T* mean, const T* var, const T* gamma, T eps,
                      T* dx, T* dgamma, T* dbeta) {
    const long chw = static_cast<long>(c) * hw;

#pragma omp parallel for schedule(static)
    for (int ch = 0; ch < c; ++ch) {
        const double m = static_cast<double>(mean[ch]);
        const double inv = 1.0 / std::sqrt(static_cast<double>(var[ch]) + static_cast<double>(eps));
        const double g = static_cast<double>(gamma[ch]);
        double sum_gy = 0.0, sum_gy_xhat = 0.0;
        for (int nn = 0; nn < n; ++nn) {
            const T* xr = x + nn * chw + static_cast<long>(ch) * hw;
            const T* gr = gy + nn * chw + static_cast<long>(ch) * hw;
            T* dr = dx ? dx + nn * chw + static_cast<long>(ch) * hw : nullptr;
            for (int k = 0; k < hw; ++k) {
                const double xhat = (static_cast<double>(xr[k]) - m) * inv;
                sum_gy += static_cast<double>(gr[k]);
                sum_gy_xhat += static_cast<double>(gr[k]) * xhat;
                if (dr) dr[k] += static_cast<T>(g * inv * static_cast<double>(gr[k]));
            }
        }
        if (dgamma) dgamma[ch] += static_cast<T>(sum_gy_xhat);
        if (dbeta) dbeta[ch] += static_cast<T>(sum_gy);
    }
}

template <class T>
void act_forward(Act kind, T alpha, const T* x, T* y, size_t count) {
    const long n = static_cast<long>(count);
    switch (kind) {
        case Act::Sigmoid:
#pragma omp parallel for schedule(static)
            for (long i = 0; i < n; ++i) y[i] = T(1) / (T(1) + std::exp(-x[i]));
            break;
        case Act::Tanh:
#pragma omp parallel for schedule(static)
            for (long i = 0; i < n; ++i) y[i] = std::tanh(x[i]);
            break;
        case Act::LeakyRelu:
#pragma omp parallel for schedule(static)
            for (long i = 0; i < n; ++i) y[i] = x[i] >= T(0) ? x[i] : alpha * x[i];
            break;
    }
}

template <class T>
void act_backward(Act kind, T alpha, const T* x, const T* y, const T* gy,
                  T* gx, size_t count) {
    const long n = static_cast<long>(count);
    switch (kind) {
        case Act::Sigmoid:
#pragma omp parallel for schedule(static)
            for (long i = 0; i < n; ++i) gx[i] += gy[i] * y[i] * (T(1) - y[i]);
            break;
        case Act::Tanh:
#pragma omp parallel for schedule(static)
            for (long i = 0; i < n; ++i) gx[i] += gy[i] * (T(1) - y[i] * y[i]);
            break;
        case Act::LeakyRelu:
#pragma omp parallel for schedule(static)
            for (long i = 0; i < n; ++i) gx[i] += gy[i] * (x[i] >= T(0) ? T(1) : alpha);
            break;
    }
}

template <class T>
void axpy(const T* a, const T* b, T c, T* y, size_t count) {
    const long n = static_cast<long>(count);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) y[i] = a[i] + c * b[i];
}

template <class T>
void accumulate_scaled(const T* g, T c, T* y, size_t count) {
    const long n = static_cast<long>(count);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) y[i] += c * g[i];
}

// clang-format off
template void conv_corr<float>(const float*, int, int, int, int, const float*, int, int, int, int, int, float*, int, int, bool);
template void conv_corr<double>(const double*, int, int, int, int, const double*, int, int, int, int, int, double*, int, int, bool);
template void conv_adjoint<float>(const float*, int, int, int, int, const float*, int, int, int, int, int, float*, int, int, bool);
template void conv_adjoint<double>(const double*, int, int, int, int, const double*, int, int, int, int, int, double*, int, int, bool);
template void conv_wgrad<float>(const float*, int, int, int, int, const float*, int, int, int, int, int, int, int, float*, bool);
template void conv_wgrad<double>(const double*, int, int, int, int, const double*, int, int, int, int, int, int, int, double*, bool);
template void bn_batch_stats<float>(const float*, int, int, int, float*, float*);
template void bn_batch_stats<double>(const double*, int, int, int, double*, double*);
template void bn_apply<float>(const float*, int, int, int, const float*, const float*, const float*, const float*, float, float*);
template void bn_apply<double>(const double*, int, int, int, const double*, const double*, const double*, const double*, double, double*);
template void bn_backward_train<float>(const float*, const float*, int, int, int, const float*, const float*, const float*, float, float*, float*, float*);
template void bn_backward_train<double>(const double*, const double*, int, int, int, const double*, const double*, const double*, double, double*, double*, double*);
template void bn_backward_eval<float>(const float*, const float*, int, int, int, const float*, const float*, const float*, float, float*, float*, float*);
template void bn_backward_eval<double>(const double*, const double*, int, int, int, const double*, const double*, const double*, double, double*, double*, double*);
template void act_forward<float>(Act, float, const float*, float*, size_t);
template void act_forward<double>(Act, double, const double*, double*, size_t);
template void act_backward<float>(Act, float, const float*, const float*, const float*, float*, size_t);
template void act_backward<double>(Act, double, const double*, const double*, const double*, double*, size_t);
template void axpy<float>(const float*, const float*, float, float*, size_t);
template void axpy<double>(const double*, const double*, double, double*, size_t);
template void accumulate_scaled<float>(const float*, float, float*, size_t);
template void accumulate_scaled<double>(const double*, double, double*, size_t);
// clang-format on

} // namespace alocc::kern
