#pragma once

#include <stdexcept>
#include <string>

namespace magneto {

// Error taxonomy mirrors the CLI exit-code contract:
// config 2, io 3, measurement 4, training 5.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};
struct MeasureError : std::runtime_error {
    explicit MeasureError(const std::string& msg) : std::runtime_error(msg) {}
};
struct TrainError : std::runtime_error {
    explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace magneto
