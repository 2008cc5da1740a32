// Seeded randomness. Generator: mt19937_64 with an explicit Box-Muller
// transform for Gaussians, so noise realizations are bit-identical across
// standard library implementations.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "bumblebee/iqcore.hpp"

namespace bumblebee {

inline constexpr const char* kGeneratorName = "mt19937_64/box-muller";

// splitmix64 finalizer, used to derive independent per-point seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(const char* s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (; *s; ++s) h = (h ^ std::uint64_t(std::uint8_t(*s))) * 0x100000001b3ull;
    return h;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() {
        return double(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; one spare value cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    Bit bit() { return Bit(engine_() & 1); }

    BitStream bits(std::size_t n) {
        BitStream out(n);
        for (auto& b : out) b = bit();
        return out;
    }

    std::vector<std::uint8_t> bytes(std::size_t n) {
        std::vector<std::uint8_t> out(n);
        for (auto& b : out) b = std::uint8_t(engine_() & 0xff);
        return out;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace bumblebee
