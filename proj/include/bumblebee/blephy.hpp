// BLE carrier generation: GFSK modulator, LE Coded PHY coding chain
// (rate-1/2 convolutional FEC, pattern mapper, CRC-24, whitening) and
// link-layer packet assembly for all four PHY modes.
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "bumblebee/iqcore.hpp"
#include "bumblebee/rng.hpp"

namespace bumblebee::ble {

inline constexpr std::uint32_t kAdvAccessAddress = 0x8E89BED6u;
inline constexpr std::uint32_t kAdvCrcInit = 0x555555u;
inline constexpr int kAdvChannel = 37;

struct GfskParams {
    double bt = 0.5;
    double modulation_index = 0.5;
    double symbol_rate = 1e6;
    int samples_per_symbol = 16;
    int filter_span_symbols = 3;
};

inline GfskParams gfsk_params_for(PhyMode mode) {
    GfskParams p;
    p.symbol_rate = symbol_rate(mode);
    p.samples_per_symbol = int(kSampleRate / p.symbol_rate);
    return p;
}

// Gaussian pulse taps, normalized to unit sum so a long run of equal
// symbols settles the filtered NRZ value at exactly +-1.
inline std::vector<double> gaussian_taps(double bt, int sps, int span) {
    const int half = span * sps / 2;
    std::vector<double> taps(2 * half + 1);
    const double k = 2.0 * std::numbers::pi * std::numbers::pi * bt * bt / std::log(2.0);
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        double t = double(i) / sps;  // in symbol periods
        double v = std::exp(-k * t * t);
        taps[std::size_t(i + half)] = v;
        sum += v;
    }
    for (double& v : taps) v /= sum;
    return taps;
}

/// Constant-envelope GFSK: phase is the integral of the Gaussian-filtered
/// NRZ symbol train, scaled so one steady-state symbol advances the phase
/// by +-pi*h. Output length = symbols * samples_per_symbol.
inline Waveform gfsk_modulate(const BitStream& symbols, const GfskParams& params) {
    if (symbols.empty()) throw std::invalid_argument("empty symbol stream");
    if (params.samples_per_symbol < 2)
        throw std::invalid_argument("samples_per_symbol must be >= 2");

    const int sps = params.samples_per_symbol;
    const std::vector<double> taps =
        gaussian_taps(params.bt, sps, params.filter_span_symbols);
    const int half = int(taps.size()) / 2;
    const std::size_t n_out = symbols.size() * std::size_t(sps);

    // NRZ hold, zero-padded at the edges ('same' convolution).
    std::vector<double> nrz(n_out + 2 * std::size_t(half), 0.0);
    for (std::size_t n = 0; n < n_out; ++n)
        nrz[n + std::size_t(half)] = symbols[n / std::size_t(sps)] ? 1.0 : -1.0;

    Waveform w;
    w.sample_rate = params.symbol_rate * sps;
    w.samples.reserve(n_out);
    const double gain = std::numbers::pi * params.modulation_index / sps;
    const std::size_t n_taps = taps.size();
    double phase = 0.0;
    for (std::size_t n = 0; n < n_out; ++n) {
        double f = 0.0;
        const double* src = nrz.data() + n;
        for (std::size_t i = 0; i < n_taps; ++i) f += taps[i] * src[i];
        phase += gain * f;
        w.samples.push_back(std::polar(1.0, phase));
    }
    return w;
}

/// Non-systematic rate-1/2 convolutional encoder over a 3-bit delay line,
/// generators 1+x+x^2+x^3 and 1+x^2+x^3. The state is not auto-flushed;
/// callers append TERM bits.
class ConvEncoder {
  public:
    BitStream encode(const BitStream& bits) {
        BitStream out;
        out.reserve(bits.size() * 2);
        for (Bit in : bits) {
            out.push_back(Bit(in ^ d1_ ^ d2_ ^ d3_));
            out.push_back(Bit(in ^ d2_ ^ d3_));
            d3_ = d2_;
            d2_ = d1_;
            d1_ = in;
        }
        return out;
    }

    bool state_is_zero() const { return !(d1_ | d2_ | d3_); }
    void reset() { d1_ = d2_ = d3_ = 0; }

  private:
    Bit d1_ = 0, d2_ = 0, d3_ = 0;
};

inline BitStream conv_encode(const BitStream& bits) {
    ConvEncoder enc;
    return enc.encode(bits);
}

enum class CodingScheme { S2, S8 };

/// Pattern mapper: S2 passes coded bits through; S8 expands bit 0 to
/// symbols 0,0,1,1 and bit 1 to 1,1,0,0.
inline BitStream pattern_map(const BitStream& coded_bits, CodingScheme scheme) {
    if (scheme == CodingScheme::S2) return coded_bits;
    BitStream out;
    out.reserve(coded_bits.size() * 4);
    for (Bit b : coded_bits) {
        if (b) {
            out.insert(out.end(), {1, 1, 0, 0});
        } else {
            out.insert(out.end(), {0, 0, 1, 1});
        }
    }
    return out;
}

// Link-layer CRC: x^24+x^10+x^9+x^6+x^4+x^3+x+1, bits consumed in
// over-the-air order. Tap mask excludes the x^24 term.
inline constexpr std::uint32_t kCrc24Poly = 0x00065B;

inline std::uint32_t crc24_register(const BitStream& bits, std::uint32_t init) {
    std::uint32_t reg = init & 0xFFFFFF;
    for (Bit b : bits) {
        std::uint32_t fb = ((reg >> 23) & 1u) ^ b;
        reg = (reg << 1) & 0xFFFFFF;
        if (fb) reg ^= kCrc24Poly;
    }
    return reg;
}

/// Final CRC register serialized in transmission order (bit 23 first).
inline BitStream crc24(const BitStream& bits, std::uint32_t init) {
    std::uint32_t reg = crc24_register(bits, init);
    BitStream out(24);
    for (int i = 0; i < 24; ++i) out[std::size_t(i)] = Bit((reg >> (23 - i)) & 1u);
    return out;
}

/// Data whitening: XOR with the LFSR x^7+x^4+1 seeded from the channel
/// index with position 0 forced to 1. Involutive.
inline BitStream whiten(const BitStream& bits, int channel) {
    if (channel < 0 || channel > 39)
        throw std::invalid_argument("channel index out of range 0..39");
    // p[0] = 1, p[1..6] = channel index bits, most significant first.
    Bit p[7] = {1, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 6; ++i) p[1 + i] = Bit((channel >> (5 - i)) & 1);
    BitStream out;
    out.reserve(bits.size());
    for (Bit b : bits) {
        Bit o = p[6];
        for (int i = 6; i > 0; --i) p[i] = p[i - 1];
        p[0] = o;
        p[4] = Bit(p[4] ^ o);
        out.push_back(Bit(b ^ o));
    }
    return out;
}

struct CodedPacketConfig {
    std::uint32_t access_address = kAdvAccessAddress;
    CodingScheme ci = CodingScheme::S8;  // FEC block 2 scheme
    BitStream pdu;                       // 1..255 bytes
    std::uint32_t crc_init = kAdvCrcInit;
    bool whitening = true;
    int channel = kAdvChannel;
};

inline BitStream access_address_bits(std::uint32_t aa) {
    BitStream bits(32);
    for (int i = 0; i < 32; ++i) bits[std::size_t(i)] = Bit((aa >> i) & 1u);
    return bits;
}

inline void append(BitStream& dst, const BitStream& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

/// GFSK symbol stream for an LE Coded packet: uncoded preamble, FEC
/// block 1 (access address + CI + TERM1, always S8), FEC block 2
/// (whitened PDU+CRC + TERM2, scheme per CI). Encoder state carries
/// across fields within a block and resets between blocks.
inline BitStream build_coded_packet(const CodedPacketConfig& cfg) {
    if (cfg.pdu.size() < 8 || cfg.pdu.size() > 255 * 8 || cfg.pdu.size() % 8 != 0)
        throw std::invalid_argument("pdu length must be 1..255 whole bytes");

    BitStream symbols;
    // Preamble: 8-symbol pattern repeated 10 times, not coded.
    const BitStream preamble_unit = {0, 0, 1, 1, 1, 1, 0, 0};
    for (int i = 0; i < 10; ++i) append(symbols, preamble_unit);

    // FEC block 1: AA || CI || TERM1, S8.
    BitStream block1 = access_address_bits(cfg.access_address);
    if (cfg.ci == CodingScheme::S8) {
        block1.insert(block1.end(), {0, 0});
    } else {
        block1.insert(block1.end(), {0, 1});
    }
    block1.insert(block1.end(), {0, 0, 0});  // TERM1
    append(symbols, pattern_map(conv_encode(block1), CodingScheme::S8));

    // FEC block 2: whitened(PDU || CRC) || TERM2, scheme per CI.
    BitStream payload = cfg.pdu;
    append(payload, crc24(cfg.pdu, cfg.crc_init));
    if (cfg.whitening) payload = whiten(payload, cfg.channel);
    payload.insert(payload.end(), {0, 0, 0});  // TERM2
    append(symbols, pattern_map(conv_encode(payload), cfg.ci));
    return symbols;
}

/// GFSK symbol stream for an uncoded (LE1M/LE2M) packet:
/// preamble || access address || whitened(payload || CRC).
inline BitStream build_uncoded_packet(PhyMode mode, const CodedPacketConfig& cfg) {
    if (cfg.pdu.empty()) throw std::invalid_argument("empty payload");
    BitStream symbols;
    // Alternating preamble starting with the access address LSB;
    // 8 symbols for LE1M, 16 for LE2M.
    const int preamble_len = mode == PhyMode::LE2M ? 16 : 8;
    const Bit first = Bit(cfg.access_address & 1u);
    for (int i = 0; i < preamble_len; ++i) symbols.push_back(Bit((first + i) & 1));
    append(symbols, access_address_bits(cfg.access_address));
    BitStream payload = cfg.pdu;
    append(payload, crc24(cfg.pdu, cfg.crc_init));
    if (cfg.whitening) payload = whiten(payload, cfg.channel);
    append(symbols, payload);
    return symbols;
}

inline BitStream packet_symbols(PhyMode mode, const CodedPacketConfig& cfg) {
    switch (mode) {
        case PhyMode::LE1M:
        case PhyMode::LE2M:
            return build_uncoded_packet(mode, cfg);
        case PhyMode::LE500K: {
            CodedPacketConfig c = cfg;
            c.ci = CodingScheme::S2;
            return build_coded_packet(c);
        }
        case PhyMode::LE125K: {
            CodedPacketConfig c = cfg;
            c.ci = CodingScheme::S8;
            return build_coded_packet(c);
        }
    }
    throw std::logic_error("unknown PHY mode");
}

/// One BLE packet as a baseband waveform at the global 16 MHz rate.
inline Waveform generate_ble_waveform(PhyMode mode, const BitStream& payload,
                                      const GfskParams& params,
                                      CodedPacketConfig cfg) {
    if (payload.empty()) throw std::invalid_argument("empty payload");
    cfg.pdu = payload;
    return gfsk_modulate(packet_symbols(mode, cfg), params);
}

inline Waveform generate_ble_waveform(PhyMode mode, const BitStream& payload) {
    return generate_ble_waveform(mode, payload, gfsk_params_for(mode), {});
}

/// Carrier of at least min_samples: back-to-back packets with random
/// 255-byte payloads, modulated in one pass so phase stays continuous
/// across packet boundaries.
inline Waveform generate_carrier(PhyMode mode, std::size_t min_samples, Rng& rng) {
    const GfskParams params = gfsk_params_for(mode);
    const std::size_t sps = std::size_t(params.samples_per_symbol);
    BitStream symbols;
    while (symbols.size() * sps < min_samples) {
        CodedPacketConfig cfg;
        cfg.pdu = bytes_to_bits(rng.bytes(255));
        append(symbols, packet_symbols(mode, cfg));
    }
    return gfsk_modulate(symbols, params);
}

}  // namespace bumblebee::ble
