#pragma once

#include <vector>

#include "alocc/tensor.hpp"

namespace alocc {

/// Adam with bias correction. Moment buffers are aligned index-for-index
/// with the parameter list handed to init(); the step counter increases by
/// exactly one per adam_step call.
template <class T>
struct AdamState {
    T lr = static_cast<T>(2e-4);
    T beta1 = static_cast<T>(0.5);
    T beta2 = static_cast<T>(0.999);
    T eps = static_cast<T>(1e-8);
    long step_count = 0;
    std::vector<std::vector<T>> m;
    std::vector<std::vector<T>> v;

    void init(const std::vector<Tensor<T>>& params) {
        m.clear();
        v.clear();
        for (const auto& p : params) {
            m.emplace_back(p.numel(), T(0));
            v.emplace_back(p.numel(), T(0));
        }
        step_count = 0;
    }
};

template <class T>
void adam_step(std::vector<Tensor<T>>& params, AdamState<T>& state) {
    if (params.size() != state.m.size())
        throw UsageError("adam_step: state not initialized for this parameter list");
    state.step_count += 1;
    const T bc1 = T(1) - static_cast<T>(std::pow(static_cast<double>(state.beta1),
                                                 static_cast<double>(state.step_count)));
    const T bc2 = T(1) - static_cast<T>(std::pow(static_cast<double>(state.beta2),
                                                 static_cast<double>(state.step_count)));

    for (size_t pi = 0; pi < params.size(); ++pi) {
        Tensor<T>& p = params[pi];
        if (!p.requires_grad()) throw UsageError("adam_step: parameter has no gradient buffer");
        if (state.m[pi].size() != p.numel())
            throw UsageError("adam_step: moment buffer shape mismatch");
        const T* g = p.grad().data();
        T* w = p.data();
        T* m = state.m[pi].data();
        T* v = state.v[pi].data();
        const long n = static_cast<long>(p.numel());
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) {
            m[i] = state.beta1 * m[i] + (T(1) - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (T(1) - state.beta2) * g[i] * g[i];
            const T mhat = m[i] / bc1;
            const T vhat = v[i] / bc2;
            w[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

} // namespace alocc
