// Phase-shift distributions, BER computation, and the Monte-Carlo
// BER-vs-SNR sweep harness comparing Bumblebee against Interscatter.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "bumblebee/backscatter.hpp"
#include "bumblebee/blephy.hpp"
#include "bumblebee/channel.hpp"
#include "bumblebee/iqcore.hpp"
#include "bumblebee/zigbeephy.hpp"

namespace bumblebee::analysis {

using zigbee::per_chip_phase_shifts;

struct PhaseHistogram {
    std::vector<double> bin_edges;  // bin_count + 1, strictly increasing
    std::vector<std::uint64_t> counts;
    std::uint64_t out_of_range = 0;
    std::uint64_t total = 0;
};

inline PhaseHistogram histogram(const std::vector<double>& values, int bin_count,
                                double lo, double hi) {
    if (values.empty()) throw std::invalid_argument("empty value set");
    if (bin_count < 1) throw std::invalid_argument("bin_count must be >= 1");
    if (!(lo < hi)) throw std::invalid_argument("degenerate histogram range");
    PhaseHistogram h;
    h.bin_edges.resize(std::size_t(bin_count) + 1);
    for (int i = 0; i <= bin_count; ++i)
        h.bin_edges[std::size_t(i)] = lo + (hi - lo) * double(i) / double(bin_count);
    h.counts.assign(std::size_t(bin_count), 0);
    for (double v : values) {
        ++h.total;
        if (v < lo || v > hi) {
            ++h.out_of_range;
            continue;
        }
        auto idx = std::size_t((v - lo) / (hi - lo) * bin_count);
        if (idx >= h.counts.size()) idx = h.counts.size() - 1;  // v == hi
        ++h.counts[idx];
    }
    return h;
}

inline double fraction_in_range(const std::vector<double>& values, double lo,
                                double hi) {
    if (values.empty()) throw std::invalid_argument("empty value set");
    std::size_t in = 0;
    for (double v : values) in += (v >= lo && v <= hi);
    return double(in) / double(values.size());
}

enum class Scheme { BumblebeePhaseAdd, BumblebeeSquareWave, Interscatter };

inline const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::BumblebeePhaseAdd: return "bumblebee-phase-add";
        case Scheme::BumblebeeSquareWave: return "bumblebee-square-wave";
        case Scheme::Interscatter: return "interscatter";
    }
    return "?";
}

struct BerRecord {
    std::string mode;    // "le1m"/"le500k"/... or "zigbee" for Interscatter
    std::string scheme;
    double snr_db = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
};

struct BerResult {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_total = 0;
    double ber = 0.0;
};

inline BerResult ber(const BitStream& tx, const BitStream& rx) {
    if (tx.size() != rx.size()) throw std::invalid_argument("length mismatch");
    BerResult r;
    r.bits_total = tx.size();
    for (std::size_t i = 0; i < tx.size(); ++i) r.bit_errors += tx[i] != rx[i];
    r.ber = r.bits_total ? double(r.bit_errors) / double(r.bits_total) : 0.0;
    return r;
}

struct SweepConfig {
    std::vector<PhyMode> modes = {PhyMode::LE1M, PhyMode::LE500K, PhyMode::LE125K};
    std::vector<Scheme> schemes = {Scheme::BumblebeePhaseAdd, Scheme::Interscatter};
    double snr_start = -15.0;
    double snr_stop = 15.0;
    double snr_step = 1.0;
    std::size_t tag_bytes = 4096;
    std::uint64_t base_seed = 1;
    int trials_per_point = 3;
    int workers = 1;
};

namespace detail {

struct Point {
    std::string mode;  // label; empty mode set for Interscatter
    PhyMode phy = PhyMode::LE1M;
    Scheme scheme = Scheme::Interscatter;
    double snr_db = 0.0;
};

inline std::uint64_t point_seed(std::uint64_t base, const Point& p, int trial) {
    std::uint64_t h = base;
    h = mix64(h ^ fnv1a(p.mode.c_str()));
    h = mix64(h ^ fnv1a(to_string(p.scheme)));
    h = mix64(h ^ std::uint64_t(std::int64_t(std::llround(p.snr_db * 1000.0)) + (1ll << 40)));
    h = mix64(h ^ std::uint64_t(trial + 1));
    return h;
}

inline BerResult run_trial(const SweepConfig& cfg, const Point& p, int trial) {
    const std::uint64_t seed = point_seed(cfg.base_seed, p, trial);
    Rng tag_rng(mix64(seed ^ 1));
    const BitStream tag_bits = tag_rng.bits(cfg.tag_bytes * 8);

    Waveform txw;
    if (p.scheme == Scheme::Interscatter) {
        txw = zigbee::modulate_bits(tag_bits);
    } else {
        const std::size_t tag_samples =
            tag_bits.size() / 4 * 32 * std::size_t(kSamplesPerChip);
        Rng carrier_rng(mix64(seed ^ 2));
        Waveform carrier = ble::generate_carrier(p.phy, tag_samples, carrier_rng);
        const auto method = p.scheme == Scheme::BumblebeePhaseAdd
                                ? tag::Method::PhaseAddition
                                : tag::Method::SquareWave;
        txw = tag::bumblebee_link(carrier, tag_bits, method);
    }
    Waveform rxw = channel::awgn(txw, {p.snr_db, mix64(seed ^ 3)});
    const BitStream rx_bits = zigbee::zigbee_demodulate(rxw);
    return ber(tag_bits, rx_bits);
}

}  // namespace detail

/// Deterministic BER sweep over (mode, scheme, snr). Interscatter does
/// not use a BLE carrier and contributes a single series regardless of
/// the mode set. Records are ordered by (mode, scheme, snr); the worker
/// count affects neither content nor order.
inline std::vector<BerRecord> run_sweep(const SweepConfig& cfg) {
    if (cfg.snr_start > cfg.snr_stop) throw std::invalid_argument("snr_start > snr_stop");
    if (cfg.snr_step <= 0.0) throw std::invalid_argument("snr_step must be > 0");
    if (cfg.tag_bytes < 1) throw std::invalid_argument("tag_bytes must be >= 1");
    if (cfg.trials_per_point < 1)
        throw std::invalid_argument("trials_per_point must be >= 1");

    std::vector<double> snrs;
    for (double s = cfg.snr_start; s <= cfg.snr_stop + 1e-9; s += cfg.snr_step)
        snrs.push_back(s);

    std::vector<detail::Point> points;
    for (Scheme sch : cfg.schemes) {
        if (sch == Scheme::Interscatter) {
            for (double s : snrs) points.push_back({"zigbee", PhyMode::LE1M, sch, s});
        } else {
            for (PhyMode m : cfg.modes)
                for (double s : snrs) points.push_back({to_string(m), m, sch, s});
        }
    }
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
        return std::tie(a.mode, a.scheme, a.snr_db) < std::tie(b.mode, b.scheme, b.snr_db);
    });

    std::vector<BerRecord> records(points.size());
    std::exception_ptr failure;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= points.size() || failed.load()) return;
            const detail::Point& p = points[i];
            try {
                BerRecord rec;
                rec.mode = p.mode;
                rec.scheme = to_string(p.scheme);
                rec.snr_db = p.snr_db;
                for (int t = 0; t < cfg.trials_per_point; ++t) {
                    BerResult r = detail::run_trial(cfg, p, t);
                    rec.bit_errors += r.bit_errors;
                    rec.bits_total += r.bits_total;
                }
                rec.ber = double(rec.bit_errors) / double(rec.bits_total);
                records[i] = std::move(rec);
            } catch (const std::exception& e) {
                if (!failed.exchange(true))
                    failure = std::make_exception_ptr(std::runtime_error(
                        "sweep point (" + p.mode + ", " + to_string(p.scheme) + ", " +
                        std::to_string(p.snr_db) + " dB) failed: " + e.what()));
                return;
            }
        }
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

}  // namespace bumblebee::analysis
