#include "tempocast/params.hpp"

#include <cstring>
#include <fstream>

#include "tempocast/error.hpp"

namespace tempocast {

namespace {

constexpr char kMagic[6] = {'T', 'C', 'A', 'S', 'T', '1'};

// Parameter files are little-endian; that is the native order everywhere this
// project runs, so reads/writes are direct.
template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool read_pod(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return static_cast<bool>(is);
}

}  // namespace

Tensor ParameterSet::add(const std::string& name, Shape shape, std::vector<double> init) {
    if (index_.count(name)) throw ConfigError("duplicate parameter name: " + name);
    Tensor t = Tensor::from_values(std::move(shape), std::move(init), /*requires_grad=*/true);
    index_[name] = items_.size();
    items_.emplace_back(name, t);
    return t;
}

const Tensor& ParameterSet::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("no parameter named " + name);
    return items_[it->second].second;
}

std::size_t ParameterSet::total_elements() const {
    std::size_t n = 0;
    for (const auto& [name, t] : items_) n += t.numel();
    return n;
}

void ParameterSet::zero_grads() {
    for (auto& [name, t] : items_) t.zero_grad();
}

std::uint64_t ParameterSet::checksum() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& [name, t] : items_) {
        const auto& v = t.values();
        const unsigned char* bytes = reinterpret_cast<const unsigned char*>(v.data());
        for (std::size_t i = 0; i < v.size() * sizeof(double); ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;
        }
    }
    return h;
}

void ParameterSet::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open " + path + " for writing");
    os.write(kMagic, sizeof(kMagic));
    for (const auto& [name, t] : items_) {
        write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(t.rank()));
        for (int d : t.shape()) write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(d));
        os.write(reinterpret_cast<const char*>(t.values().data()),
                 static_cast<std::streamsize>(t.numel() * sizeof(double)));
    }
    if (!os) throw DataError("short write to " + path);
}

void ParameterSet::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open " + path);
    char magic[6];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DataError(path + ": not a TCAST1 parameter file");
    std::size_t seen = 0;
    while (true) {
        std::uint32_t name_len = 0;
        if (!read_pod(is, name_len)) break;  // clean EOF
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        std::uint32_t rank = 0;
        if (!read_pod(is, rank)) throw DataError(path + ": truncated header for " + name);
        Shape shape(rank);
        std::size_t numel = 1;
        for (std::uint32_t i = 0; i < rank; ++i) {
            std::uint64_t d = 0;
            if (!read_pod(is, d)) throw DataError(path + ": truncated dims for " + name);
            shape[i] = static_cast<int>(d);
            numel *= d;
        }
        auto it = index_.find(name);
        if (it == index_.end()) throw DataError(path + ": unknown parameter " + name);
        Tensor& t = items_[it->second].second;
        if (t.shape() != shape)
            throw DataError(path + ": shape mismatch for " + name + ": file " + shape_str(shape) +
                            " vs model " + shape_str(t.shape()));
        is.read(reinterpret_cast<char*>(t.mutable_values().data()),
                static_cast<std::streamsize>(numel * sizeof(double)));
        if (!is) throw DataError(path + ": truncated data for " + name);
        ++seen;
    }
    if (seen != items_.size())
        throw DataError(path + ": file holds " + std::to_string(seen) + " parameters, model expects " +
                        std::to_string(items_.size()));
}

}  // namespace tempocast
