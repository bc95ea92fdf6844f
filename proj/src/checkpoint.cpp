#include "opsum/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "opsum/errors.hpp"

namespace opsum {

using nlohmann::json;

namespace {
constexpr char kMagic[8] = {'O', 'P', 'S', 'U', 'M', 'T', 'N', 'S'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

const Mat& Checkpoint::tensor(const std::string& name) const {
    for (const auto& [n, m] : tensors)
        if (n == name) return m;
    throw ValidationError("checkpoint has no tensor '" + name + "'");
}

bool Checkpoint::has_tensor(const std::string& name) const {
    for (const auto& [n, _] : tensors)
        if (n == name) return true;
    return false;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    json meta;
    meta["kind"] = ckpt.kind;
    meta["strings"] = ckpt.strings;
    meta["scalars"] = ckpt.scalars;
    meta["string_lists"] = ckpt.string_lists;
    meta["number_lists"] = ckpt.number_lists;
    json manifest = json::array();
    for (const auto& [name, m] : ckpt.tensors)
        manifest.push_back({{"name", name}, {"rows", m.rows}, {"cols", m.cols}});
    meta["tensors"] = std::move(manifest);
    const std::string header = meta.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    std::uint32_t version = kVersion;
    out.write(reinterpret_cast<const char*>(&version), sizeof(version));
    std::uint64_t header_len = header.size();
    out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    for (const auto& [_, m] : ckpt.tensors)
        out.write(reinterpret_cast<const char*>(m.data.data()),
                  static_cast<std::streamsize>(m.data.size() * sizeof(double)));
    if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw ParseError("not a checkpoint file: " + path);
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (version != kVersion)
        throw ParseError("unsupported checkpoint version " + std::to_string(version));
    std::uint64_t header_len = 0;
    in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
    std::string header(header_len, '\0');
    in.read(header.data(), static_cast<std::streamsize>(header_len));
    if (!in) throw ParseError("truncated checkpoint header: " + path);

    json meta = json::parse(header, nullptr, false);
    if (meta.is_discarded()) throw ParseError("corrupt checkpoint metadata: " + path);

    Checkpoint ckpt;
    ckpt.kind = meta.at("kind").get<std::string>();
    ckpt.strings = meta.at("strings").get<std::map<std::string, std::string>>();
    ckpt.scalars = meta.at("scalars").get<std::map<std::string, double>>();
    ckpt.string_lists =
        meta.at("string_lists").get<std::map<std::string, std::vector<std::string>>>();
    ckpt.number_lists = meta.at("number_lists").get<std::map<std::string, Vec>>();
    for (const json& t : meta.at("tensors")) {
        Mat m(t.at("rows").get<std::size_t>(), t.at("cols").get<std::size_t>());
        in.read(reinterpret_cast<char*>(m.data.data()),
                static_cast<std::streamsize>(m.data.size() * sizeof(double)));
        if (!in) throw ParseError("truncated tensor payload: " + path);
        ckpt.add_tensor(t.at("name").get<std::string>(), std::move(m));
    }
    return ckpt;
}

}  // namespace opsum
