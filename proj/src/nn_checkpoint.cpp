#include "magneto/nn/checkpoint.hpp"
#include "magneto/errors.hpp"

#include <cstdint>
#include <fstream>

namespace magneto::nn {

using nlohmann::json;

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    json header;
    header["arch"] = ckpt.arch;
    header["meta"] = ckpt.meta;
    header["params"] = json::array();
    for (const auto& e : ckpt.params.entries())
        header["params"].push_back({{"name", e.name}, {"shape", e.shape}});

    const std::string text = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);

    const std::uint64_t len = text.size();
    out.write(reinterpret_cast<const char*>(&len), 8);
    out.write(text.data(), std::streamsize(text.size()));
    for (const auto& e : ckpt.params.entries()) {
        const std::uint64_t count = e.values.size();
        out.write(reinterpret_cast<const char*>(&count), 8);
        out.write(reinterpret_cast<const char*>(e.values.data()),
                  std::streamsize(count * sizeof(float)));
    }
    if (!out) throw IoError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);

    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), 8);
    if (!in || len == 0 || len > (std::uint64_t(1) << 30))
        throw IoError(path + ": bad checkpoint header length");
    std::string text(len, '\0');
    in.read(text.data(), std::streamsize(len));
    if (!in) throw IoError(path + ": truncated checkpoint header");

    json header;
    try {
        header = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(path + ": invalid checkpoint header: " + e.what());
    }

    Checkpoint ckpt;
    ckpt.arch = header.at("arch").get<std::string>();
    ckpt.meta = header.value("meta", json::object());
    for (const auto& p : header.at("params")) {
        const std::string name = p.at("name").get<std::string>();
        const auto shape = p.at("shape").get<std::vector<std::size_t>>();
        auto& values = ckpt.params.add(name, shape);
        std::uint64_t count = 0;
        in.read(reinterpret_cast<char*>(&count), 8);
        if (!in || count != values.size())
            throw IoError(path + ": blob size mismatch for " + name);
        in.read(reinterpret_cast<char*>(values.data()),
                std::streamsize(count * sizeof(float)));
        if (!in) throw IoError(path + ": truncated blob for " + name);
    }
    return ckpt;
}

} // namespace magneto::nn
