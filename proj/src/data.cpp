#include "alocc/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "alocc/random.hpp"

namespace fs = std::filesystem;

namespace alocc {

Tensor<float> Dataset::batch(const std::vector<size_t>& idx) const {
    if (idx.empty()) throw UsageError("dataset: empty batch");
    const size_t stride = sample_stride();
    Tensor<float> out({static_cast<int>(idx.size()), channels, height, width});
    for (size_t b = 0; b < idx.size(); ++b)
        std::memcpy(out.data() + b * stride, sample(idx[b]), stride * sizeof(float));
    return out;
}

Tensor<float> Dataset::sample_tensor(size_t i) const { return batch({i}); }

Dataset Dataset::subset(const std::vector<size_t>& idx) const {
    Dataset d;
    d.channels = channels;
    d.height = height;
    d.width = width;
    for (size_t i : idx) d.append_sample(sample(i), labels[i], roles[i]);
    return d;
}

Dataset Dataset::where_label(int class_id, bool equal) const {
    std::vector<size_t> idx;
    for (size_t i = 0; i < size(); ++i)
        if ((labels[i] == class_id) == equal) idx.push_back(i);
    return subset(idx);
}

void Dataset::append_sample(const float* data, int label, Role role) {
    pixels.insert(pixels.end(), data, data + sample_stride());
    labels.push_back(label);
    roles.push_back(role);
}

namespace {

uint32_t read_be32(std::istream& in, const std::string& path) {
    uint8_t b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (in.gcount() != 4) throw FormatError("idx: truncated header in " + path);
    return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

} // namespace

Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                       int pad_to) {
    std::ifstream imgs(images_path, std::ios::binary);
    if (!imgs) throw FormatError("idx: cannot open " + images_path);
    std::ifstream lbls(labels_path, std::ios::binary);
    if (!lbls) throw FormatError("idx: cannot open " + labels_path);

    if (read_be32(imgs, images_path) != 0x00000803u)
        throw FormatError("idx: bad image magic in " + images_path);
    if (read_be32(lbls, labels_path) != 0x00000801u)
        throw FormatError("idx: bad label magic in " + labels_path);

    const uint32_t n_images = read_be32(imgs, images_path);
    const uint32_t rows = read_be32(imgs, images_path);
    const uint32_t cols = read_be32(imgs, images_path);
    const uint32_t n_labels = read_be32(lbls, labels_path);
    if (n_images != n_labels)
        throw FormatError("idx: image/label count mismatch between " + images_path + " and " +
                          labels_path);
    if (rows < 1 || cols < 1) throw FormatError("idx: bad dimensions in " + images_path);

    const int out_h = pad_to > 0 ? pad_to : static_cast<int>(rows);
    const int out_w = pad_to > 0 ? pad_to : static_cast<int>(cols);
    if (static_cast<int>(rows) > out_h || static_cast<int>(cols) > out_w)
        throw UsageError("idx: images larger than the canonical padded size");
    const int off_y = (out_h - static_cast<int>(rows)) / 2;
    const int off_x = (out_w - static_cast<int>(cols)) / 2;

    Dataset d;
    d.channels = 1;
    d.height = out_h;
    d.width = out_w;
    d.pixels.assign(static_cast<size_t>(n_images) * out_h * out_w, -1.0f);
    d.labels.resize(n_images);
    d.roles.assign(n_images, Role::Unlabeled);

    std::vector<uint8_t> raw(static_cast<size_t>(rows) * cols);
    for (uint32_t i = 0; i < n_images; ++i) {
        imgs.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<size_t>(imgs.gcount()) != raw.size())
            throw FormatError("idx: truncated image data in " + images_path);
        float* dst = d.pixels.data() + static_cast<size_t>(i) * out_h * out_w;
        for (uint32_t y = 0; y < rows; ++y)
            for (uint32_t x = 0; x < cols; ++x)
                dst[(off_y + y) * out_w + (off_x + x)] =
                    static_cast<float>(raw[y * cols + x]) / 255.0f * 2.0f - 1.0f;
    }
    for (uint32_t i = 0; i < n_labels; ++i) {
        char c;
        lbls.read(&c, 1);
        if (lbls.gcount() != 1) throw FormatError("idx: truncated label data in " + labels_path);
        d.labels[i] = static_cast<int>(static_cast<uint8_t>(c));
    }
    return d;
}

std::vector<float> resize_bilinear(const float* src, int src_h, int src_w, int dst_h, int dst_w) {
    std::vector<float> out(static_cast<size_t>(dst_h) * dst_w);
    const double sy = static_cast<double>(src_h) / dst_h;
    const double sx = static_cast<double>(src_w) / dst_w;
    for (int y = 0; y < dst_h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(src_h - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, src_h - 1);
        const double wy = fy - y0;
        for (int x = 0; x < dst_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(src_w - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, src_w - 1);
            const double wx = fx - x0;
            const double top = src[y0 * src_w + x0] * (1.0 - wx) + src[y0 * src_w + x1] * wx;
            const double bot = src[y1 * src_w + x0] * (1.0 - wx) + src[y1 * src_w + x1] * wx;
            out[static_cast<size_t>(y) * dst_w + x] = static_cast<float>(top * (1.0 - wy) + bot * wy);
        }
    }
    return out;
}

std::vector<std::string> list_files_sorted(const std::string& dir) {
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir);
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file()) files.push_back(e.path().string());
    std::sort(files.begin(), files.end(), [](const std::string& a, const std::string& b) {
        return fs::path(a).filename().string() < fs::path(b).filename().string();
    });
    return files;
}

Dataset load_image_dir(const std::string& path, int size) {
    const std::vector<std::string> files = list_files_sorted(path);
    Dataset d;
    if (files.empty()) return d;

    std::vector<Image8> images;
    images.reserve(files.size());
    int channels = 1;
    for (const auto& f : files) {
        images.push_back(decode_image(f));
        channels = std::max(channels, images.back().channels);
    }

    d.channels = channels;
    d.height = size;
    d.width = size;
    std::vector<float> plane(static_cast<size_t>(1), 0.0f);
    for (const auto& img : images) {
        std::vector<float> sample(static_cast<size_t>(channels) * size * size);
        for (int c = 0; c < channels; ++c) {
            // Gray images replicate their single plane when promoted to RGB.
            const int src_c = img.channels == channels ? c : 0;
            plane.assign(static_cast<size_t>(img.height) * img.width, 0.0f);
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x)
                    plane[static_cast<size_t>(y) * img.width + x] =
                        static_cast<float>(img.pixels[(static_cast<size_t>(y) * img.width + x) *
                                                          img.channels +
                                                      src_c]) /
                            255.0f * 2.0f -
                        1.0f;
            std::vector<float> resized = resize_bilinear(plane.data(), img.height, img.width,
                                                         size, size);
            std::copy(resized.begin(), resized.end(),
                      sample.begin() + static_cast<size_t>(c) * size * size);
        }
        d.pixels.insert(d.pixels.end(), sample.begin(), sample.end());
        d.labels.push_back(-1);
        d.roles.push_back(Role::Unlabeled);
    }
    return d;
}

Dataset make_mixture(const Dataset& inliers, const Dataset& outliers, double outlier_fraction,
                     uint64_t seed) {
    if (!(outlier_fraction > 0.0 && outlier_fraction < 1.0))
        throw UsageError("make_mixture: fraction must be in (0,1)");
    if (inliers.size() == 0) throw UsageError("make_mixture: empty inlier set");
    if (inliers.channels != outliers.channels || inliers.height != outliers.height ||
        inliers.width != outliers.width)
        throw DimensionError("make_mixture: inlier/outlier sample shapes differ");

    const long n_out = std::lround(outlier_fraction * static_cast<double>(inliers.size()) /
                                   (1.0 - outlier_fraction));
    if (static_cast<size_t>(n_out) > outliers.size())
        throw UsageError("make_mixture: insufficient outlier pool");

    Rng rng(seed);
    std::vector<size_t> pool(outliers.size());
    std::iota(pool.begin(), pool.end(), size_t(0));
    shuffle(pool, rng);

    Dataset mixed;
    mixed.channels = inliers.channels;
    mixed.height = inliers.height;
    mixed.width = inliers.width;
    for (size_t i = 0; i < inliers.size(); ++i)
        mixed.append_sample(inliers.sample(i), inliers.labels[i], Role::Inlier);
    for (long i = 0; i < n_out; ++i)
        mixed.append_sample(outliers.sample(pool[i]), outliers.labels[pool[i]], Role::Outlier);

    std::vector<size_t> order(mixed.size());
    std::iota(order.begin(), order.end(), size_t(0));
    shuffle(order, rng);
    return mixed.subset(order);
}

GrayImage to_gray(const Image8& img) {
    GrayImage g;
    g.height = img.height;
    g.width = img.width;
    g.pixels.resize(static_cast<size_t>(img.height) * img.width);
    for (size_t i = 0; i < g.pixels.size(); ++i) {
        double v;
        if (img.channels >= 3) {
            const uint8_t* p = img.pixels.data() + i * img.channels;
            v = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
        } else {
            v = img.pixels[i];
        }
        g.pixels[i] = static_cast<float>(v / 255.0 * 2.0 - 1.0);
    }
    return g;
}

std::vector<GrayImage> load_frames(const std::string& dir) {
    std::vector<GrayImage> frames;
    for (const auto& f : list_files_sorted(dir)) frames.push_back(to_gray(decode_image(f)));
    return frames;
}

namespace {

std::vector<int> grid_positions(int extent, int patch, int stride) {
    std::vector<int> pos;
    for (int p = 0; p + patch <= extent; p += stride) pos.push_back(p);
    if (pos.empty() || pos.back() + patch < extent) pos.push_back(extent - patch);
    return pos;
}

} // namespace

Dataset extract_patches(const GrayImage& frame, int patch, int stride, int net_size) {
    if (patch < 1 || stride < 1) throw UsageError("extract_patches: bad patch/stride");
    if (frame.height < patch || frame.width < patch)
        throw UsageError("extract_patches: frame smaller than the patch size");

    const std::vector<int> ys = grid_positions(frame.height, patch, stride);
    const std::vector<int> xs = grid_positions(frame.width, patch, stride);

    Dataset d;
    d.channels = 1;
    d.height = net_size;
    d.width = net_size;
    std::vector<float> window(static_cast<size_t>(patch) * patch);
    for (int y : ys)
        for (int x : xs) {
            for (int i = 0; i < patch; ++i)
                for (int j = 0; j < patch; ++j)
                    window[static_cast<size_t>(i) * patch + j] =
                        frame.pixels[static_cast<size_t>(y + i) * frame.width + (x + j)];
            std::vector<float> resized =
                resize_bilinear(window.data(), patch, patch, net_size, net_size);
            d.pixels.insert(d.pixels.end(), resized.begin(), resized.end());
            d.labels.push_back(-1);
            d.roles.push_back(Role::Unlabeled);
        }
    return d;
}

} // namespace alocc
