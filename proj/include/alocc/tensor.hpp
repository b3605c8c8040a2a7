#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "alocc/error.hpp"

namespace alocc {

/// Dense n-dimensional array over float or double. Copies share storage;
/// tensors are treated as immutable once produced by an op, except the
/// gradient buffer which backward()/zero_grad() mutate.
template <class T>
class Tensor {
public:
    Tensor() = default;

    explicit Tensor(std::vector<int> shape)
        : shape_(std::move(shape)),
          data_(std::make_shared<std::vector<T>>(checked_numel(shape_), T(0))) {}

    Tensor(std::vector<int> shape, std::vector<T> values)
        : shape_(std::move(shape)), data_(std::make_shared<std::vector<T>>(std::move(values))) {
        if (checked_numel(shape_) != data_->size())
            throw DimensionError("tensor: shape does not match value count");
    }

    static Tensor full(std::vector<int> shape, T value) {
        Tensor t(std::move(shape));
        for (auto& v : *t.data_) v = value;
        return t;
    }

    static Tensor scalar(T value) { return Tensor({1}, {value}); }

    bool defined() const { return data_ != nullptr; }
    const std::vector<int>& shape() const { return shape_; }
    int rank() const { return static_cast<int>(shape_.size()); }
    int dim(int i) const { return shape_.at(static_cast<size_t>(i)); }
    size_t numel() const { return data_ ? data_->size() : 0; }

    T* data() { return data_->data(); }
    const T* data() const { return data_->data(); }
    std::vector<T>& values() { return *data_; }
    const std::vector<T>& values() const { return *data_; }

    T item() const {
        if (numel() != 1) throw UsageError("tensor: item() requires exactly one element");
        return (*data_)[0];
    }

    /// Allocates (or drops) the gradient buffer. Grad has the same shape as data.
    void set_requires_grad(bool on) {
        if (on && !grad_) grad_ = std::make_shared<std::vector<T>>(numel(), T(0));
        if (!on) grad_.reset();
    }
    bool requires_grad() const { return grad_ != nullptr; }

    std::vector<T>& grad() {
        if (!grad_) throw UsageError("tensor: gradient requested but requires_grad is off");
        return *grad_;
    }
    const std::vector<T>& grad() const {
        if (!grad_) throw UsageError("tensor: gradient requested but requires_grad is off");
        return *grad_;
    }
    T* grad_data() { return grad_->data(); }

    void zero_grad() {
        if (grad_) std::fill(grad_->begin(), grad_->end(), T(0));
    }

    /// Deep copy of the values. The copy starts without a gradient buffer.
    Tensor clone() const {
        Tensor t;
        t.shape_ = shape_;
        t.data_ = std::make_shared<std::vector<T>>(*data_);
        return t;
    }

    /// Same storage viewed under a new shape with equal element count.
    Tensor reshaped(std::vector<int> shape) const {
        if (checked_numel(shape) != numel())
            throw DimensionError("tensor: reshape changes element count");
        Tensor t(*this);
        t.shape_ = std::move(shape);
        return t;
    }

    /// Identity of the underlying storage; used by the tape for bookkeeping.
    const void* id() const { return data_.get(); }

private:
    static size_t checked_numel(const std::vector<int>& shape) {
        size_t n = 1;
        for (int d : shape) {
            if (d <= 0) throw DimensionError("tensor: dimensions must be positive");
            n *= static_cast<size_t>(d);
        }
        return n;
    }

    std::vector<int> shape_;
    std::shared_ptr<std::vector<T>> data_;
    std::shared_ptr<std::vector<T>> grad_;
};

template <class T>
bool all_finite(const Tensor<T>& t) {
    for (T v : t.values())
        if (!std::isfinite(v)) return false;
    return true;
}

/// Validation op: surfaces NaN/Inf propagation as an error.
template <class T>
void assert_finite(const Tensor<T>& t, const char* what) {
    if (!all_finite(t)) {
        std::ostringstream os;
        os << "non-finite values in " << what;
        throw NumericError(os.str());
    }
}

/// Recorded reverse-mode program: an ordered list of backward rules, replayed
/// once in reverse by backward(). Confined to one thread.
template <class T>
class Tape {
public:
    void record(const Tensor<T>& output, std::function<void()> backward_fn) {
        entries_.push_back({output, std::move(backward_fn)});
        outputs_.insert(output.id());
    }

    bool recorded(const Tensor<T>& t) const { return outputs_.count(t.id()) != 0; }
    size_t size() const { return entries_.size(); }

    void clear() {
        entries_.clear();
        outputs_.clear();
    }

    /// Seeds d(loss)/d(loss) = 1 and replays all rules in reverse order.
    /// Leaf gradients accumulate additively across calls until explicitly
    /// zeroed; gradients of recorded intermediates are recomputed fresh.
    void backward(Tensor<T>& loss) {
        if (loss.numel() != 1) throw UsageError("backward: loss must be a scalar");
        if (!recorded(loss)) throw UsageError("backward: tensor was not produced on this tape");
        for (auto& e : entries_) e.output.zero_grad();
        loss.grad()[0] = T(1);
        for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) it->fn();
    }

private:
    struct Entry {
        Tensor<T> output;
        std::function<void()> fn;
    };
    std::vector<Entry> entries_;
    std::unordered_set<const void*> outputs_;
};

} // namespace alocc
