#pragma once

#include "magneto/nn/params.hpp"

#include <json.hpp>
#include <string>

namespace magneto::nn {

/// One-file checkpoint: little-endian u64 JSON length, JSON header bytes
/// (architecture id, hyperparameters, parameter manifest), then one
/// length-prefixed float32 blob per named parameter in header order.
struct Checkpoint {
    std::string arch;
    nlohmann::json meta;
    ParamStore<float> params;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

} // namespace magneto::nn
