// AWGN channel with SNR calibrated against the measured signal power,
// per complex sample.
#pragma once

#include <cmath>

#include "bumblebee/iqcore.hpp"
#include "bumblebee/rng.hpp"

namespace bumblebee::channel {

struct ChannelConfig {
    double snr_db = 0.0;
    std::uint64_t seed = 0;
};

/// Adds circularly-symmetric complex Gaussian noise with per-sample
/// variance measure_power(w) / 10^(snr_db/10), split equally between the
/// real and imaginary parts. Deterministic for a fixed seed.
inline Waveform awgn(const Waveform& w, const ChannelConfig& cfg) {
    const double signal_power = measure_power(w);  // throws on empty input
    const double noise_var = signal_power / std::pow(10.0, cfg.snr_db / 10.0);
    const double sigma = std::sqrt(noise_var / 2.0);

    Rng rng(cfg.seed);
    Waveform out;
    out.sample_rate = w.sample_rate;
    out.samples.reserve(w.size());
    for (const Sample& s : w.samples)
        out.samples.emplace_back(s.real() + sigma * rng.gaussian(),
                                 s.imag() + sigma * rng.gaussian());
    return out;
}

}  // namespace bumblebee::channel
