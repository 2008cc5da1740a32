// The tag: overwrites data on a BLE carrier by phase manipulation,
// either by adding the phase of a ZigBee waveform or by the idealized
// +-pi/2 square-wave phase schedule.
#pragma once

#include <stdexcept>

#include "bumblebee/iqcore.hpp"
#include "bumblebee/zigbeephy.hpp"

namespace bumblebee::tag {

enum class Method { SquareWave, PhaseAddition };

inline const char* to_string(Method m) {
    return m == Method::SquareWave ? "square-wave" : "phase-add";
}

/// output[n] = |carrier[n]| * exp(j(arg carrier[n] + arg tag[n])).
/// Output length equals the tag length; magnitudes are the carrier's.
inline Waveform phase_add_modulate(const Waveform& carrier,
                                   const Waveform& tag_waveform) {
    if (carrier.sample_rate != tag_waveform.sample_rate)
        throw std::invalid_argument("sample-rate mismatch");
    if (tag_waveform.size() > carrier.size())
        throw std::invalid_argument("carrier too short");
    Waveform out;
    out.sample_rate = carrier.sample_rate;
    out.samples.reserve(tag_waveform.size());
    for (std::size_t n = 0; n < tag_waveform.size(); ++n) {
        double mag = std::abs(carrier.samples[n]);
        double phase = std::arg(carrier.samples[n]) + std::arg(tag_waveform.samples[n]);
        out.samples.push_back(std::polar(mag, phase));
    }
    return out;
}

/// Steps the carrier phase by +pi/2 per chip for chip 1 and -pi/2 for
/// chip 0, as a linear ramp across each chip window. Tag bits are spread
/// to chips exactly as in the ZigBee modulator.
inline Waveform square_wave_modulate(const Waveform& carrier,
                                     const BitStream& tag_bits,
                                     const zigbee::ZigbeeParams& params = {}) {
    const BitStream chips = zigbee::spread(zigbee::bits_to_symbols(tag_bits));
    const std::size_t N = std::size_t(params.samples_per_chip);
    const std::size_t n_out = chips.size() * N;
    if (n_out > carrier.size()) throw std::invalid_argument("carrier too short");

    Waveform out;
    out.sample_rate = carrier.sample_rate;
    out.samples.reserve(n_out);
    // Ramp over the N-1 increments inside the phase-measurement window
    // [kN, (k+1)N-1], so each chip contributes exactly +-pi/2.
    const double step = std::numbers::pi / 2.0 / double(N - 1);
    double offset = 0.0;
    for (std::size_t n = 0; n < n_out; ++n) {
        if (n % N != 0) offset += chips[n / N] ? step : -step;
        double mag = std::abs(carrier.samples[n]);
        out.samples.push_back(std::polar(mag, std::arg(carrier.samples[n]) + offset));
    }
    return out;
}

/// Dispatch on the tag method. For PhaseAddition the tag waveform is the
/// ZigBee modulation of the tag bits.
inline Waveform bumblebee_link(const Waveform& carrier, const BitStream& tag_bits,
                               Method method,
                               const zigbee::ZigbeeParams& params = {}) {
    if (method == Method::SquareWave)
        return square_wave_modulate(carrier, tag_bits, params);
    return phase_add_modulate(carrier, zigbee::modulate_bits(tag_bits, params));
}

}  // namespace bumblebee::tag
