#include "dense/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "dense/errors.hpp"

namespace dense {

namespace {

constexpr std::array<char, 8> kMagic = {'D', 'E', 'N', 'S', 'E', 'K', 'G', '\0'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw DataError("truncated checkpoint: " + path);
    return value;
}

}  // namespace

void save_checkpoint(const ModelParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open checkpoint for writing: " + path);

    out.write(kMagic.data(), kMagic.size());
    write_pod<std::uint32_t>(out, kVersion);
    write_pod<std::uint32_t>(out, params.scaling() ? 1u : 0u);
    write_pod<std::int64_t>(out, params.entity_count());
    write_pod<std::int64_t>(out, params.relation_count());
    write_pod<std::int64_t>(out, params.k());
    out.write(reinterpret_cast<const char*>(params.entity_table().data()),
              static_cast<std::streamsize>(params.entity_table().size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(params.relation_table().data()),
              static_cast<std::streamsize>(params.relation_table().size() * sizeof(double)));
    if (!out) throw DataError("failed writing checkpoint: " + path);
}

ModelParams load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);

    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || std::memcmp(magic.data(), kMagic.data(), magic.size()) != 0)
        throw DataError("not a checkpoint file (bad magic): " + path);

    const auto version = read_pod<std::uint32_t>(in, path);
    if (version != kVersion)
        throw DataError("unsupported checkpoint version " + std::to_string(version) + ": " + path);

    const auto flags = read_pod<std::uint32_t>(in, path);
    const auto entity_count = read_pod<std::int64_t>(in, path);
    const auto relation_count = read_pod<std::int64_t>(in, path);
    const auto k = read_pod<std::int64_t>(in, path);
    if (entity_count < 1 || relation_count < 1 || k < 1)
        throw DataError("checkpoint has invalid shape header: " + path);

    ModelParams params(static_cast<std::int32_t>(entity_count),
                       static_cast<std::int32_t>(relation_count), static_cast<std::int32_t>(k),
                       (flags & 1u) != 0);
    in.read(reinterpret_cast<char*>(params.entity_table().data()),
            static_cast<std::streamsize>(params.entity_table().size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(params.relation_table().data()),
            static_cast<std::streamsize>(params.relation_table().size() * sizeof(double)));
    if (!in) throw DataError("truncated checkpoint: " + path);
    return params;
}

}  // namespace dense
