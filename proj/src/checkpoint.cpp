#include "alocc/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "alocc/config_io.hpp"

namespace alocc {

namespace {

constexpr std::array<char, 4> kMagic = {'A', 'L', 'O', 'C'};
constexpr uint8_t kVersion = 1;

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
}

template <class T>
void put_raw(std::vector<uint8_t>& out, const T* data, size_t count) {
    const size_t bytes = count * sizeof(T);
    const size_t at = out.size();
    out.resize(at + bytes);
    std::memcpy(out.data() + at, data, bytes);
}

struct Reader {
    const std::vector<uint8_t>& buf;
    size_t pos = 0;
    const std::string& path;

    void need(size_t n) const {
        if (pos + n > buf.size()) throw FormatError("checkpoint: truncated file " + path);
    }
    uint8_t u8() {
        need(1);
        return buf[pos++];
    }
    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(buf[pos] | (buf[pos + 1] << 8));
        pos += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::string str(size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(buf.data() + pos), n);
        pos += n;
        return s;
    }
    template <class T>
    std::vector<T> raw(size_t count) {
        need(count * sizeof(T));
        std::vector<T> v(count);
        std::memcpy(v.data(), buf.data() + pos, count * sizeof(T));
        pos += count * sizeof(T);
        return v;
    }
};

} // namespace

uint32_t crc32(const uint8_t* data, size_t len) {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t c = 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xFFu] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

size_t Checkpoint::NamedTensor::element_count() const {
    size_t n = 1;
    for (uint32_t d : dims) n *= d;
    return n;
}

Checkpoint make_checkpoint(const Network& r, const Network& d, const TrainConfig& cfg,
                           uint64_t rng_seed) {
    Checkpoint ckpt;
    ckpt.r_config = r.config();
    ckpt.d_config = d.config();
    ckpt.train_config = cfg;
    ckpt.rng_seed = rng_seed;

    auto add_all = [&](const Network& net, const char* prefix) {
        for (const NamedBuffer& b : net.export_state()) {
            Checkpoint::NamedTensor t;
            t.name = std::string(prefix) + b.name;
            t.dtype = 0;
            t.dims = b.dims;
            t.f32 = b.data;
            ckpt.tensors.push_back(std::move(t));
        }
    };
    add_all(r, "r.");
    add_all(d, "d.");
    return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    out.push_back(ckpt.version);
    put_u32(out, static_cast<uint32_t>(ckpt.tensors.size()));

    for (const auto& t : ckpt.tensors) {
        put_u16(out, static_cast<uint16_t>(t.name.size()));
        put_raw(out, t.name.data(), t.name.size());
        out.push_back(t.dtype);
        out.push_back(static_cast<uint8_t>(t.dims.size()));
        for (uint32_t d : t.dims) put_u32(out, d);
        if (t.dtype == 0)
            put_raw(out, t.f32.data(), t.f32.size());
        else
            put_raw(out, t.f64.data(), t.f64.size());
    }

    nlohmann::json cfg{{"version", ckpt.version},
                       {"r", network_config_to_json(ckpt.r_config)},
                       {"d", network_config_to_json(ckpt.d_config)},
                       {"train", train_config_to_json(ckpt.train_config)},
                       {"seed", ckpt.rng_seed}};
    const std::string cfg_text = cfg.dump();
    put_u32(out, static_cast<uint32_t>(cfg_text.size()));
    put_raw(out, cfg_text.data(), cfg_text.size());

    put_u32(out, crc32(out.data(), out.size()));

    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("checkpoint: cannot write " + path);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("checkpoint: cannot open " + path);
    std::vector<uint8_t> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    if (buf.size() < kMagic.size() + 1 + 4 + 4)
        throw FormatError("checkpoint: truncated file " + path);
    if (std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0)
        throw FormatError("checkpoint: bad magic in " + path);

    uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i)
        stored_crc |= static_cast<uint32_t>(buf[buf.size() - 4 + i]) << (8 * i);
    if (crc32(buf.data(), buf.size() - 4) != stored_crc)
        throw FormatError("checkpoint: CRC32 mismatch in " + path);

    Reader rd{buf, kMagic.size(), path};
    Checkpoint ckpt;
    ckpt.version = rd.u8();
    if (ckpt.version != kVersion)
        throw FormatError("checkpoint: unsupported version " + std::to_string(ckpt.version) +
                          " in " + path + " (supported: 1)");

    const uint32_t count = rd.u32();
    for (uint32_t i = 0; i < count; ++i) {
        Checkpoint::NamedTensor t;
        t.name = rd.str(rd.u16());
        t.dtype = rd.u8();
        if (t.dtype > 1) throw FormatError("checkpoint: unknown dtype in " + path);
        const uint8_t rank = rd.u8();
        for (int k = 0; k < rank; ++k) t.dims.push_back(rd.u32());
        if (t.dtype == 0)
            t.f32 = rd.raw<float>(t.element_count());
        else
            t.f64 = rd.raw<double>(t.element_count());
        ckpt.tensors.push_back(std::move(t));
    }

    const std::string cfg_text = rd.str(rd.u32());
    try {
        const nlohmann::json cfg = nlohmann::json::parse(cfg_text);
        ckpt.r_config = network_config_from_json(cfg.at("r"));
        ckpt.d_config = network_config_from_json(cfg.at("d"));
        ckpt.train_config = train_config_from_json(cfg.at("train"));
        ckpt.rng_seed = cfg.at("seed").get<uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("checkpoint: bad config block in " + path + ": " + e.what());
    }
    if (rd.pos != buf.size() - 4)
        throw FormatError("checkpoint: trailing bytes in " + path);
    return ckpt;
}

std::pair<Network, Network> restore_networks(const Checkpoint& ckpt) {
    Network r = build_r(ckpt.r_config, uint64_t(0));
    Network d = build_d(ckpt.d_config, uint64_t(0));

    auto take = [&](const char* prefix) {
        std::vector<NamedBuffer> buffers;
        const std::string p(prefix);
        for (const auto& t : ckpt.tensors) {
            if (t.name.rfind(p, 0) != 0) continue;
            if (t.dtype != 0) throw FormatError("checkpoint: network tensors must be f32");
            buffers.push_back({t.name.substr(p.size()), t.dims, t.f32});
        }
        return buffers;
    };
    r.import_state(take("r."));
    d.import_state(take("d."));
    return {std::move(r), std::move(d)};
}

} // namespace alocc
