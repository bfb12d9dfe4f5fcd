#pragma once

#include "magneto/errors.hpp"
#include "magneto/rng.hpp"

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace magneto::nn {

/// Named parameter arrays with immutable shapes. Doubles as gradient
/// storage: grads are a ParamStore with the same layout.
template <typename T>
class ParamStore {
public:
    struct Entry {
        std::string name;
        std::vector<std::size_t> shape;
        std::vector<T> values;
    };

    std::vector<T>& add(const std::string& name, std::vector<std::size_t> shape) {
        if (index_.count(name)) throw ConfigError("ParamStore: duplicate name " + name);
        std::size_t n = 1;
        for (std::size_t d : shape) n *= d;
        index_[name] = entries_.size();
        entries_.push_back({name, std::move(shape), std::vector<T>(n, T(0))});
        return entries_.back().values;
    }

    std::vector<T>& at(const std::string& name) {
        auto it = index_.find(name);
        if (it == index_.end()) throw ConfigError("ParamStore: unknown name " + name);
        return entries_[it->second].values;
    }
    const std::vector<T>& at(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw ConfigError("ParamStore: unknown name " + name);
        return entries_[it->second].values;
    }
    bool contains(const std::string& name) const { return index_.count(name) != 0; }

    std::vector<Entry>& entries() { return entries_; }
    const std::vector<Entry>& entries() const { return entries_; }

    std::size_t total_values() const {
        std::size_t n = 0;
        for (const auto& e : entries_) n += e.values.size();
        return n;
    }

    /// Same names/shapes, zero-filled (gradient or moment buffers).
    ParamStore like() const {
        ParamStore out;
        for (const auto& e : entries_) out.add(e.name, e.shape);
        return out;
    }

    void zero() {
        for (auto& e : entries_)
            std::fill(e.values.begin(), e.values.end(), T(0));
    }

    void accumulate(const ParamStore& other, T scale = T(1)) {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            auto& dst = entries_[i].values;
            const auto& src = other.entries_[i].values;
            for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += scale * src[k];
        }
    }

    template <typename U>
    ParamStore<U> cast() const {
        ParamStore<U> out;
        for (const auto& e : entries_) {
            auto& v = out.add(e.name, e.shape);
            for (std::size_t k = 0; k < e.values.size(); ++k) v[k] = U(e.values[k]);
        }
        return out;
    }

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

template <typename T>
void uniform_init(std::vector<T>& v, double bound, Rng& rng) {
    for (auto& x : v) x = T(rng.uniform(-bound, bound));
}

} // namespace magneto::nn
