#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alocc/image.hpp"
#include "alocc/tensor.hpp"

namespace alocc {

enum class Role : uint8_t { Inlier, Outlier, Unlabeled };

/// Uniform-shape sample collection; pixel values live in [-1,1] and samples
/// are stored contiguously (size * C*H*W floats).
struct Dataset {
    int channels = 0, height = 0, width = 0;
    std::vector<float> pixels;
    std::vector<int> labels; // source class id, -1 when unknown
    std::vector<Role> roles;

    size_t size() const { return labels.size(); }
    size_t sample_stride() const {
        return static_cast<size_t>(channels) * height * width;
    }
    const float* sample(size_t i) const { return pixels.data() + i * sample_stride(); }

    /// Gathers the given samples into a [B,C,H,W] tensor.
    Tensor<float> batch(const std::vector<size_t>& idx) const;
    Tensor<float> sample_tensor(size_t i) const;

    Dataset subset(const std::vector<size_t>& idx) const;
    /// Samples whose label compares (equal/not equal) to class_id.
    Dataset where_label(int class_id, bool equal) const;
    void append_sample(const float* data, int label, Role role);
};

/// Parses an MNIST IDX image/label pair (big-endian magics 0x00000803 and
/// 0x00000801), maps pixels from [0,255] to [-1,1] and zero-pads (background
/// pixel 0 -> -1) each image centered into pad_to x pad_to. pad_to = 0 keeps
/// the native size.
Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                       int pad_to = 32);

/// Decodes every regular file in the directory in lexicographic filename
/// order, resizes bilinearly to size x size and scales to [-1,1]. Mixed
/// gray/color directories are promoted to the widest channel count seen.
/// An empty directory gives an empty dataset.
Dataset load_image_dir(const std::string& path, int size);

/// Mixes all inliers with round(fraction/(1-fraction) * |inliers|) outliers
/// drawn without replacement; roles tagged, order shuffled, all driven by
/// the seed.
Dataset make_mixture(const Dataset& inliers, const Dataset& outliers, double outlier_fraction,
                     uint64_t seed);

/// Single-channel image in [-1,1] at native resolution (for video frames).
struct GrayImage {
    int height = 0, width = 0;
    std::vector<float> pixels;
};

GrayImage to_gray(const Image8& img);
std::vector<std::string> list_files_sorted(const std::string& dir);
std::vector<GrayImage> load_frames(const std::string& dir);

/// Non-overlapping patch grid (stride defaults to the patch size); trailing
/// partial windows are shifted inward so the grid covers every pixel. Each
/// patch is resized to net_size for the networks.
Dataset extract_patches(const GrayImage& frame, int patch = 30, int stride = 30,
                        int net_size = 32);

/// Bilinear resample (half-pixel centers) of one channel plane.
std::vector<float> resize_bilinear(const float* src, int src_h, int src_w, int dst_h, int dst_w);

} // namespace alocc
