// IEEE 802.15.4-style O-QPSK/DSSS modem: chip table, spreading,
// half-sine modulator, and the commodity quadrature demodulator that
// decides chips from the sign of the per-chip phase shift.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "bumblebee/iqcore.hpp"

namespace bumblebee::zigbee {

struct ZigbeeParams {
    double chip_rate = kChipRate;           // 2 Mchip/s
    int samples_per_chip = kSamplesPerChip; // 8 at the 16 MHz global rate
};

/// 16 pseudo-noise rows of 32 chips, indexed by 4-bit symbol value.
/// Rows 1..7 are cyclic shifts of row 0 by 4k chips; rows 8..15 invert
/// the odd-indexed chips. Minimum pairwise Hamming distance is 12.
class ChipTable {
  public:
    static const ChipTable& instance() {
        static const ChipTable table;
        return table;
    }

    const std::array<Bit, 32>& row(int symbol) const {
        if (symbol < 0 || symbol > 15)
            throw std::invalid_argument("symbol out of range 0..15");
        return rows_[std::size_t(symbol)];
    }

    /// Row index with minimum Hamming distance to the given 32 chips;
    /// ties resolve to the lowest symbol index.
    int nearest_symbol(const Bit* chips) const {
        int best = 0, best_dist = 33;
        for (int s = 0; s < 16; ++s) {
            int d = 0;
            for (int i = 0; i < 32; ++i) d += chips[i] != rows_[std::size_t(s)][std::size_t(i)];
            if (d < best_dist) {
                best_dist = d;
                best = s;
            }
        }
        return best;
    }

  private:
    ChipTable() {
        constexpr std::string_view row0 = "11011001110000110101001000101110";
        for (int s = 0; s < 8; ++s)
            for (int i = 0; i < 32; ++i)
                rows_[std::size_t(s)][std::size_t(i)] =
                    Bit(row0[std::size_t(((i - 4 * s) % 32 + 32) % 32)] == '1');
        for (int s = 0; s < 8; ++s)
            for (int i = 0; i < 32; ++i)
                rows_[std::size_t(s + 8)][std::size_t(i)] =
                    Bit(rows_[std::size_t(s)][std::size_t(i)] ^ (i % 2));
    }

    std::array<std::array<Bit, 32>, 16> rows_;
};

/// Consecutive 4-bit groups, LSB first within each group.
inline std::vector<int> bits_to_symbols(const BitStream& bits) {
    if (bits.size() % 4 != 0)
        throw std::invalid_argument("bit count not divisible by 4");
    std::vector<int> symbols;
    symbols.reserve(bits.size() / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4)
        symbols.push_back(bits[i] | bits[i + 1] << 1 | bits[i + 2] << 2 |
                          bits[i + 3] << 3);
    return symbols;
}

inline BitStream symbols_to_bits(const std::vector<int>& symbols) {
    BitStream bits;
    bits.reserve(symbols.size() * 4);
    for (int s : symbols)
        for (int i = 0; i < 4; ++i) bits.push_back(Bit((s >> i) & 1));
    return bits;
}

inline BitStream spread(const std::vector<int>& symbols) {
    const ChipTable& table = ChipTable::instance();
    BitStream chips;
    chips.reserve(symbols.size() * 32);
    for (int s : symbols) {
        const auto& row = table.row(s);
        chips.insert(chips.end(), row.begin(), row.end());
    }
    return chips;
}

/// Half-sine-pulse O-QPSK, phrased so the MSK phase ramp in chip k has
/// the sign of chip k: branch values are precoded with the alternating
/// I/Q factor, even-index drives on I, odd-index on Q offset by one chip.
/// Chip 0 is the half-filled ramp-up (magnitude only, no phase step).
inline Waveform oqpsk_modulate(const BitStream& chips,
                               const ZigbeeParams& params = {}) {
    if (chips.size() % 2 != 0) throw std::invalid_argument("odd chip count");
    if (chips.empty()) throw std::invalid_argument("empty chip stream");
    const std::size_t M = chips.size();
    const int N = params.samples_per_chip;

    // Precode: d_k = (-1)^(k+1) * b_{k-1} * b_k is the phase-ramp sign of
    // chip k; choose b so that d_k equals the antipodal chip value.
    std::vector<double> b(M);
    b[0] = chips[0] ? 1.0 : -1.0;
    for (std::size_t k = 1; k < M; ++k) {
        double a = chips[k] ? 1.0 : -1.0;
        double flip = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
        b[k] = b[k - 1] * flip * a;
    }

    Waveform w;
    w.sample_rate = params.chip_rate * N;
    w.samples.reserve(M * std::size_t(N));
    const double half_pi_over = std::numbers::pi / (2.0 * N);  // per sample in pulse phase
    for (std::size_t n = 0; n < M * std::size_t(N); ++n) {
        const std::size_t k = n / std::size_t(N);
        const double t = double(n) + 0.5;  // sample instants at midpoints
        // Active I pulse covers chips {kI, kI+1}; likewise for Q.
        const std::size_t kI = (k % 2 == 0) ? k : k - 1;
        double i_val = b[kI] * std::sin(half_pi_over * (t - double(kI * std::size_t(N))));
        double q_val = 0.0;
        if (k >= 1) {
            const std::size_t kQ = (k % 2 == 1) ? k : k - 1;
            q_val = b[kQ] * std::sin(half_pi_over * (t - double(kQ * std::size_t(N))));
        }
        w.samples.emplace_back(i_val, q_val);
    }
    return w;
}

/// Quadrature decision rule: phase shift in [0, pi] is chip 1, in
/// [-pi, 0) chip 0. The shared boundary resolves to 1.
inline Bit chip_decide(double delta_phi) {
    if (!std::isfinite(delta_phi))
        throw std::invalid_argument("non-finite phase shift");
    return delta_phi >= 0.0 ? 1 : 0;
}

/// Per-chip phase shifts over the unwrapped trajectory:
/// dphi_k = phi[(k+1)N - 1] - phi[kN]. Trailing partial chip discarded.
inline std::vector<double> per_chip_phase_shifts(const Waveform& w,
                                                 const ZigbeeParams& params = {}) {
    const std::size_t N = std::size_t(params.samples_per_chip);
    if (w.size() < N) throw std::invalid_argument("waveform shorter than one chip");
    const std::vector<double> phi = unwrap_phase(w);
    const std::size_t chips = w.size() / N;
    std::vector<double> shifts;
    shifts.reserve(chips);
    for (std::size_t k = 0; k < chips; ++k)
        shifts.push_back(phi[(k + 1) * N - 1] - phi[k * N]);
    return shifts;
}

/// Full receive chain: per-chip phase shifts, chip decisions, 32-chip
/// regrouping, minimum-Hamming-distance despreading, 4 bits per symbol
/// LSB first. Assumes perfect chip-grid alignment.
inline BitStream zigbee_demodulate(const Waveform& w,
                                   const ZigbeeParams& params = {}) {
    const std::vector<double> shifts = per_chip_phase_shifts(w, params);
    if (shifts.size() % 32 != 0 ||
        w.size() % (32 * std::size_t(params.samples_per_chip)) != 0)
        throw std::invalid_argument("waveform is not a whole number of 32-chip symbols");
    BitStream chips(shifts.size());
    for (std::size_t i = 0; i < shifts.size(); ++i) chips[i] = chip_decide(shifts[i]);

    const ChipTable& table = ChipTable::instance();
    std::vector<int> symbols;
    symbols.reserve(chips.size() / 32);
    for (std::size_t g = 0; g + 32 <= chips.size(); g += 32)
        symbols.push_back(table.nearest_symbol(&chips[g]));
    return symbols_to_bits(symbols);
}

/// tag bits -> symbols -> chips -> baseband waveform.
inline Waveform modulate_bits(const BitStream& bits, const ZigbeeParams& params = {}) {
    return oqpsk_modulate(spread(bits_to_symbols(bits)), params);
}

}  // namespace bumblebee::zigbee
