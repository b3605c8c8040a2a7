#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "alocc/network.hpp"
#include "alocc/train.hpp"

namespace alocc {

/// Everything needed to rebuild a trained R+D pair. The on-disk layout is
/// little-endian: magic "ALOC", version byte (1), u32 tensor count, then per
/// tensor u16 name length + UTF-8 name + u8 dtype (0=f32,1=f64) + u8 rank +
/// rank u32 dims + raw payload, then a u32-length-prefixed UTF-8 JSON config
/// block, then a trailing u32 CRC32 over all preceding bytes.
struct Checkpoint {
    struct NamedTensor {
        std::string name;
        uint8_t dtype = 0; // 0 = f32, 1 = f64
        std::vector<uint32_t> dims;
        std::vector<float> f32;
        std::vector<double> f64;
        size_t element_count() const;
    };

    uint8_t version = 1;
    NetworkConfig r_config, d_config;
    TrainConfig train_config;
    uint64_t rng_seed = 0;
    std::vector<NamedTensor> tensors;
};

Checkpoint make_checkpoint(const Network& r, const Network& d, const TrainConfig& cfg,
                           uint64_t rng_seed);

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

/// Rebuilds both networks from the stored configs and tensors.
std::pair<Network, Network> restore_networks(const Checkpoint& ckpt);

/// CRC-32 (IEEE), poly 0xEDB88320.
uint32_t crc32(const uint8_t* data, size_t len);

} // namespace alocc
