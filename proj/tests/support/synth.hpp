#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alocc/random.hpp"

// Deterministic synthetic digit corpus in the official IDX byte format.
// Class 1 renders as a jittered vertical stroke; classes 0/4/7/8 render as
// rings, crosses and angled strokes. Used where real MNIST files are not
// available to the test run.

namespace synth {

struct Glyph {
    std::vector<uint8_t> pixels; // 28*28, white-on-black
};

Glyph render_digit(int class_id, alocc::Rng& rng);

struct Corpus {
    std::vector<std::vector<uint8_t>> images; // each 28*28
    std::vector<uint8_t> labels;
};

/// count samples of each listed class, interleaved deterministically.
Corpus make_corpus(const std::vector<std::pair<int, int>>& class_counts, uint64_t seed);

void write_idx_images(const std::string& path, const std::vector<std::vector<uint8_t>>& images,
                      int rows = 28, int cols = 28);
void write_idx_labels(const std::string& path, const std::vector<uint8_t>& labels);

/// Fresh scratch directory under the system temp root.
std::string make_temp_dir(const std::string& tag);

} // namespace synth
