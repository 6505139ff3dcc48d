#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace procnet {

// Deterministic RNG facade. std::mt19937_64 has a fully specified sequence,
// but std::shuffle and std::uniform_int_distribution do not, so bounded draws
// and shuffles are implemented here to get byte-identical results on every
// platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Uniform draw in [0, n). Rejection sampling, no modulo bias.
    uint64_t bounded(uint64_t n) {
        if (n == 0) return 0;
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return v % n;
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (size_t i = items.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(bounded(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// FNV-1a over a string, used to derive sub-seeds from (seed, key) pairs.
inline uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline uint64_t derive_seed(uint64_t base, const std::string& key) {
    return fnv1a64(std::to_string(base) + "|" + key);
}

}  // namespace procnet
