#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tempocast/tensor.hpp"

namespace tempocast {

/// Named collection of trainable tensors with stable iteration order.
class ParameterSet {
public:
    Tensor add(const std::string& name, Shape shape, std::vector<double> init);

    bool contains(const std::string& name) const { return index_.count(name) != 0; }
    const Tensor& at(const std::string& name) const;
    std::size_t size() const { return items_.size(); }
    std::size_t total_elements() const;

    const std::vector<std::pair<std::string, Tensor>>& items() const { return items_; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    void zero_grads();

    /// FNV-1a over the raw value bytes of every parameter in order.
    std::uint64_t checksum() const;

    /// Flat binary file: magic "TCAST1", then per parameter
    /// (u32 name length, name bytes, u32 rank, u64 dims..., f64 data...),
    /// all little-endian, until end of file.
    void save(const std::string& path) const;

    /// Restores values into an identically-constructed set; names and shapes
    /// must match exactly.
    void load(const std::string& path);

private:
    std::vector<std::pair<std::string, Tensor>> items_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace tempocast
