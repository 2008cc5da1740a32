// Core complex-baseband types and phase/power utilities.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace bumblebee {

using Sample = std::complex<double>;

// Global simulation rate: 16 MHz gives an integer number of samples for
// BLE symbols (16 at 1 Msym/s, 8 at 2 Msym/s) and ZigBee chips (8 per
// 0.5 us chip), so phase can be manipulated sample-by-sample without
// resampling.
inline constexpr double kSampleRate = 16e6;
inline constexpr double kChipRate = 2e6;
inline constexpr int kSamplesPerChip = 8;

/// Complex baseband sample buffer plus its sample rate.
struct Waveform {
    std::vector<Sample> samples;
    double sample_rate = kSampleRate;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

// Bits are stored one per element, values 0/1. Over-the-air
// serialization is least-significant-bit first within each byte.
using Bit = std::uint8_t;
using BitStream = std::vector<Bit>;

enum class PhyMode { LE1M, LE2M, LE500K, LE125K };

inline const char* to_string(PhyMode m) {
    switch (m) {
        case PhyMode::LE1M: return "le1m";
        case PhyMode::LE2M: return "le2m";
        case PhyMode::LE500K: return "le500k";
        case PhyMode::LE125K: return "le125k";
    }
    return "?";
}

inline double symbol_rate(PhyMode m) {
    return m == PhyMode::LE2M ? 2e6 : 1e6;
}

inline BitStream bytes_to_bits(const std::vector<std::uint8_t>& bytes) {
    BitStream bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes)
        for (int i = 0; i < 8; ++i) bits.push_back((b >> i) & 1);
    return bits;
}

inline std::vector<std::uint8_t> bits_to_bytes(const BitStream& bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= std::uint8_t(1u << (i % 8));
    return bytes;
}

/// Mean square magnitude of the samples.
inline double measure_power(const Waveform& w) {
    if (w.empty()) throw std::invalid_argument("empty waveform");
    double acc = 0.0;
    for (const Sample& s : w.samples) acc += std::norm(s);
    return acc / double(w.size());
}

// Maps x into (-pi, pi].
inline double wrap_to_pi(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    x = std::fmod(x, two_pi);
    if (x <= -std::numbers::pi) x += two_pi;
    if (x > std::numbers::pi) x -= two_pi;
    return x;
}

/// Continuous phase trajectory with |phi[n+1]-phi[n]| < pi and
/// phi[0] in (-pi, pi].
inline std::vector<double> unwrap_phase(const Waveform& w) {
    std::vector<double> phi;
    phi.reserve(w.size());
    double prev_arg = 0.0;
    double acc = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        const Sample& s = w.samples[n];
        if (s == Sample{0.0, 0.0})
            throw std::invalid_argument("zero sample has undefined phase");
        double a = std::arg(s);
        if (n == 0) {
            acc = a;
        } else {
            acc += wrap_to_pi(a - prev_arg);
        }
        prev_arg = a;
        phi.push_back(acc);
    }
    return phi;
}

}  // namespace bumblebee
