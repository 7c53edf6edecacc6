#include "tw/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tw::ad {

namespace {

constexpr char kMagic[8] = {'T', 'W', 'C', 'K', 'P', 'T', '0', '0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) {
        b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
    auto bits = std::bit_cast<std::uint64_t>(d);
    char b[8];
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    }
    out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        throw std::runtime_error("checkpoint: truncated file");
    }
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) {
        v = (v << 8) | b[i];
    }
    return v;
}

double get_f64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) {
        throw std::runtime_error("checkpoint: truncated file");
    }
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | b[i];
    }
    return std::bit_cast<double>(v);
}

}  // namespace

void save_checkpoint(const std::string& path, const NamedParams& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("checkpoint: cannot write " + path);
    }
    out.write(kMagic, sizeof(kMagic));
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(params.size()));
    for (const auto& [name, var] : params) {
        put_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        put_u32(out, static_cast<std::uint32_t>(var->value.rows));
        put_u32(out, static_cast<std::uint32_t>(var->value.cols));
        for (double d : var->value.a) {
            put_f64(out, d);
        }
    }
    if (!out) {
        throw std::runtime_error("checkpoint: write failed for " + path);
    }
}

NamedParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("checkpoint: cannot open " + path);
    }
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
        throw std::runtime_error("checkpoint: bad magic in " + path);
    }
    const std::uint32_t version = get_u32(in);
    if (version != kVersion) {
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(version));
    }
    const std::uint32_t count = get_u32(in);
    NamedParams params;
    params.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = get_u32(in);
        std::string name(name_len, '\0');
        if (!in.read(name.data(), name_len)) {
            throw std::runtime_error("checkpoint: truncated file");
        }
        const int rows = static_cast<int>(get_u32(in));
        const int cols = static_cast<int>(get_u32(in));
        Mat m(rows, cols);
        for (double& d : m.a) {
            d = get_f64(in);
        }
        params.emplace_back(std::move(name), parameter(std::move(m)));
    }
    return params;
}

void load_checkpoint_into(const std::string& path, const NamedParams& params) {
    NamedParams loaded = load_checkpoint(path);
    if (loaded.size() != params.size()) {
        throw std::runtime_error("checkpoint: parameter count mismatch");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (loaded[i].first != params[i].first) {
            throw std::runtime_error("checkpoint: parameter name mismatch at " + loaded[i].first);
        }
        if (!loaded[i].second->value.same_shape(params[i].second->value)) {
            throw std::runtime_error("checkpoint: shape mismatch for " + loaded[i].first);
        }
        params[i].second->value = loaded[i].second->value;
    }
}

}  // namespace tw::ad
