#include "alocc/ops.hpp"

#include <algorithm>
#include <cmath>

namespace alocc {

namespace {

template <class T>
bool tracked(Tape<T>* tape, std::initializer_list<const Tensor<T>*> inputs) {
    if (!tape) return false;
    for (const Tensor<T>* t : inputs)
        if (t->requires_grad()) return true;
    return false;
}

template <class T>
void check_conv_args(const Tensor<T>& x, const Tensor<T>& kernel, int stride, int padding) {
    if (x.rank() != 4 || kernel.rank() != 4)
        throw DimensionError("conv: input and kernel must be 4-D (N,C,H,W)");
    if (stride < 1) throw UsageError("conv: stride must be >= 1");
    if (padding < 0) throw UsageError("conv: padding must be non-negative");
}

} // namespace

template <class T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& kernel, int stride, int padding,
                 Tape<T>* tape) {
    check_conv_args(x, kernel, stride, padding);
    const int n = x.dim(0), cin = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int cout = kernel.dim(0), kh = kernel.dim(2), kw = kernel.dim(3);
    if (kernel.dim(1) != cin)
        throw DimensionError("conv2d: kernel input channels do not match input");
    const int ho = (h + 2 * padding - kh) / stride + 1;
    const int wo = (w + 2 * padding - kw) / stride + 1;
    if (kh > h + 2 * padding || kw > w + 2 * padding || ho < 1 || wo < 1)
        throw DimensionError("conv2d: kernel larger than padded input (zero-size output)");

    Tensor<T> out({n, cout, ho, wo});
    kern::conv_corr(x.data(), n, cin, h, w, kernel.data(), cout, kh, kw, stride, padding,
                    out.data(), ho, wo, false);

    if (tracked(tape, {&x, &kernel})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, kc = kernel, oc = out;
        tape->record(out, [=]() mutable {
            if (kc.requires_grad())
                kern::conv_wgrad(oc.grad().data(), n, cout, ho, wo, xc.data(), cin, h, w, kh, kw,
                                 stride, padding, kc.grad().data(), true);
            if (xc.requires_grad())
                kern::conv_adjoint(oc.grad().data(), n, cout, ho, wo, kc.data(), cin, kh, kw,
                                   stride, padding, xc.grad().data(), h, w, true);
        });
    }
    return out;
}

template <class T>
Tensor<T> conv2d_transpose(const Tensor<T>& x, const Tensor<T>& kernel, int stride, int padding,
                           Tape<T>* tape) {
    check_conv_args(x, kernel, stride, padding);
    const int n = x.dim(0), cin = x.dim(1), h = x.dim(2), w = x.dim(3);
    const int cout = kernel.dim(1), kh = kernel.dim(2), kw = kernel.dim(3);
    if (kernel.dim(0) != cin)
        throw DimensionError("conv2d_transpose: kernel input channels do not match input");
    const int ho = (h - 1) * stride - 2 * padding + kh;
    const int wo = (w - 1) * stride - 2 * padding + kw;
    if (ho < 1 || wo < 1) throw DimensionError("conv2d_transpose: non-positive output dimension");

    Tensor<T> out({n, cout, ho, wo});
    kern::conv_adjoint(x.data(), n, cin, h, w, kernel.data(), cout, kh, kw, stride, padding,
                       out.data(), ho, wo, false);

    if (tracked(tape, {&x, &kernel})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, kc = kernel, oc = out;
        tape->record(out, [=]() mutable {
            if (kc.requires_grad())
                kern::conv_wgrad(xc.data(), n, cin, h, w, oc.grad().data(), cout, ho, wo, kh, kw,
                                 stride, padding, kc.grad().data(), true);
            if (xc.requires_grad())
                kern::conv_corr(oc.grad().data(), n, cout, ho, wo, kc.data(), cin, kh, kw, stride,
                                padding, xc.grad().data(), h, w, true);
        });
    }
    return out;
}

template <class T>
Tensor<T> batch_norm(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                     BnState<T>& state, bool train, T decay, T eps, Tape<T>* tape) {
    if (x.rank() != 4) throw DimensionError("batch_norm: input must be 4-D (N,C,H,W)");
    const int n = x.dim(0), c = x.dim(1), hw = x.dim(2) * x.dim(3);
    if (gamma.numel() != static_cast<size_t>(c) || beta.numel() != static_cast<size_t>(c) ||
        state.channels() != c)
        throw DimensionError("batch_norm: channel count mismatch between x, gamma, beta, state");

    std::vector<T> mean(static_cast<size_t>(c)), var(static_cast<size_t>(c));
    if (train) {
        kern::bn_batch_stats(x.data(), n, c, hw, mean.data(), var.data());
        for (int ch = 0; ch < c; ++ch) {
            state.mean[ch] = decay * state.mean[ch] + (T(1) - decay) * mean[ch];
            state.var[ch] = decay * state.var[ch] + (T(1) - decay) * var[ch];
        }
    } else {
        mean = state.mean;
        var = state.var;
    }

    Tensor<T> out({x.dim(0), x.dim(1), x.dim(2), x.dim(3)});
    kern::bn_apply(x.data(), n, c, hw, mean.data(), var.data(), gamma.data(), beta.data(), eps,
                   out.data());

    if (tracked(tape, {&x, &gamma, &beta})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, gc = gamma, bc = beta, oc = out;
        tape->record(out, [=]() mutable {
            T* dx = xc.requires_grad() ? xc.grad().data() : nullptr;
            T* dg = gc.requires_grad() ? gc.grad().data() : nullptr;
            T* db = bc.requires_grad() ? bc.grad().data() : nullptr;
            if (train)
                kern::bn_backward_train(xc.data(), oc.grad().data(), n, c, hw, mean.data(),
                                        var.data(), gc.data(), eps, dx, dg, db);
            else
                kern::bn_backward_eval(xc.data(), oc.grad().data(), n, c, hw, mean.data(),
                                       var.data(), gc.data(), eps, dx, dg, db);
        });
    }
    return out;
}

template <class T>
Tensor<T> activation(const Tensor<T>& x, Act kind, T alpha, Tape<T>* tape) {
    Tensor<T> out(x.shape());
    kern::act_forward(kind, alpha, x.data(), out.data(), x.numel());

    if (tracked(tape, {&x})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, oc = out;
        tape->record(out, [=]() mutable {
            kern::act_backward(kind, alpha, xc.data(), oc.data(), oc.grad().data(),
                               xc.grad().data(), xc.numel());
        });
    }
    return out;
}

template <class T>
Tensor<T> mse_loss(const Tensor<T>& x, const Tensor<T>& x_prime, Tape<T>* tape) {
    if (x.shape() != x_prime.shape()) throw DimensionError("mse_loss: shape mismatch");
    const size_t count = x.numel();
    const T batch = static_cast<T>(x.dim(0));

    double acc = 0.0;
    for (size_t i = 0; i < count; ++i) {
        const double d = static_cast<double>(x.data()[i]) - static_cast<double>(x_prime.data()[i]);
        acc += d * d;
    }
    Tensor<T> out = Tensor<T>::scalar(static_cast<T>(acc / static_cast<double>(batch)));

    if (tracked(tape, {&x, &x_prime})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, pc = x_prime, oc = out;
        tape->record(out, [=]() mutable {
            const T g = oc.grad()[0];
            const T k = T(2) * g / batch;
            for (size_t i = 0; i < count; ++i) {
                const T d = xc.data()[i] - pc.data()[i];
                if (xc.requires_grad()) xc.grad()[i] += k * d;
                if (pc.requires_grad()) pc.grad()[i] -= k * d;
            }
        });
    }
    return out;
}

template <class T>
Tensor<T> bce_loss(const Tensor<T>& score, int target_label, Tape<T>* tape) {
    if (target_label != 0 && target_label != 1)
        throw UsageError("bce_loss: target label must be 0 or 1");
    constexpr double lo = 1e-7;
    constexpr double hi = 1.0 - 1e-7;
    const size_t count = score.numel();
    const double t = static_cast<double>(target_label);

    double acc = 0.0;
    for (size_t i = 0; i < count; ++i) {
        const double s = std::clamp(static_cast<double>(score.data()[i]), lo, hi);
        acc -= t * std::log(s) + (1.0 - t) * std::log(1.0 - s);
    }
    Tensor<T> out = Tensor<T>::scalar(static_cast<T>(acc / static_cast<double>(count)));

    if (tracked(tape, {&score})) {
        out.set_requires_grad(true);
        Tensor<T> sc = score, oc = out;
        tape->record(out, [=]() mutable {
            const double g = static_cast<double>(oc.grad()[0]) / static_cast<double>(count);
            for (size_t i = 0; i < count; ++i) {
                const double raw = static_cast<double>(sc.data()[i]);
                if (raw < lo || raw > hi) continue; // clamped region: constant
                sc.grad()[i] += static_cast<T>(g * (raw - t) / (raw * (1.0 - raw)));
            }
        });
    }
    return out;
}

template <class T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b, Tape<T>* tape) {
    if (a.shape() != b.shape()) throw DimensionError("add: shape mismatch");
    Tensor<T> out(a.shape());
    kern::axpy(a.data(), b.data(), T(1), out.data(), a.numel());

    if (tracked(tape, {&a, &b})) {
        out.set_requires_grad(true);
        Tensor<T> ac = a, bc = b, oc = out;
        tape->record(out, [=]() mutable {
            if (ac.requires_grad())
                kern::accumulate_scaled(oc.grad().data(), T(1), ac.grad().data(), ac.numel());
            if (bc.requires_grad())
                kern::accumulate_scaled(oc.grad().data(), T(1), bc.grad().data(), bc.numel());
        });
    }
    return out;
}

template <class T>
Tensor<T> scale(const Tensor<T>& a, T c, Tape<T>* tape) {
    Tensor<T> out(a.shape());
    for (size_t i = 0; i < a.numel(); ++i) out.data()[i] = c * a.data()[i];

    if (tracked(tape, {&a})) {
        out.set_requires_grad(true);
        Tensor<T> ac = a, oc = out;
        tape->record(out, [=]() mutable {
            kern::accumulate_scaled(oc.grad().data(), c, ac.grad().data(), ac.numel());
        });
    }
    return out;
}

template <class T>
Tensor<T> sum(const Tensor<T>& x, Tape<T>* tape) {
    double acc = 0.0;
    for (size_t i = 0; i < x.numel(); ++i) acc += static_cast<double>(x.data()[i]);
    Tensor<T> out = Tensor<T>::scalar(static_cast<T>(acc));

    if (tracked(tape, {&x})) {
        out.set_requires_grad(true);
        Tensor<T> xc = x, oc = out;
        tape->record(out, [=]() mutable {
            const T g = oc.grad()[0];
            for (size_t i = 0; i < xc.numel(); ++i) xc.grad()[i] += g;
        });
    }
    return out;
}

// clang-format off
template Tensor<float> conv2d<float>(const Tensor<float>&, const Tensor<float>&, int, int, Tape<float>*);
template Tensor<double> conv2d<double>(const Tensor<double>&, const Tensor<double>&, int, int, Tape<double>*);
template Tensor<float> conv2d_transpose<float>(const Tensor<float>&, const Tensor<float>&, int, int, Tape<float>*);
template Tensor<double> conv2d_transpose<double>(const Tensor<double>&, const Tensor<double>&, int, int, Tape<double>*);
template Tensor<float> batch_norm<float>(const Tensor<float>&, const Tensor<float>&, const Tensor<float>&, BnState<float>&, bool, float, float, Tape<float>*);
template Tensor<double> batch_norm<double>(const Tensor<double>&, const Tensor<double>&, const Tensor<double>&, BnState<double>&, bool, double, double, Tape<double>*);
template Tensor<float> activation<float>(const Tensor<float>&, Act, float, Tape<float>*);
template Tensor<double> activation<double>(const Tensor<double>&, Act, double, Tape<double>*);
template Tensor<float> mse_loss<float>(const Tensor<float>&, const Tensor<float>&, Tape<float>*);
template Tensor<double> mse_loss<double>(const Tensor<double>&, const Tensor<double>&, Tape<double>*);
template Tensor<float> bce_loss<float>(const Tensor<float>&, int, Tape<float>*);
template Tensor<double> bce_loss<double>(const Tensor<double>&, int, Tape<double>*);
template Tensor<float> add<float>(const Tensor<float>&, const Tensor<float>&, Tape<float>*);
template Tensor<double> add<double>(const Tensor<double>&, const Tensor<double>&, Tape<double>*);
template Tensor<float> scale<float>(const Tensor<float>&, float, Tape<float>*);
template Tensor<double> scale<double>(const Tensor<double>&, double, Tape<double>*);
template Tensor<float> sum<float>(const Tensor<float>&, Tape<float>*);
template Tensor<double> sum<double>(const Tensor<double>&, Tape<double>*);
// clang-format on

} // namespace alocc
