// Command-line front end: BLE carrier generation, phase-shift
// histograms, backscatter modulation, demodulation, and BER sweeps.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/validation error.

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bumblebee/analysis.hpp"
#include "bumblebee/backscatter.hpp"
#include "bumblebee/blephy.hpp"
#include "bumblebee/channel.hpp"
#include "bumblebee/iqfile.hpp"
#include "bumblebee/zigbeephy.hpp"

namespace {

using namespace bumblebee;

// Shortest round-trip decimal form.
std::string fmt(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

PhyMode parse_mode(const std::string& s) {
    if (s == "le1m") return PhyMode::LE1M;
    if (s == "le2m") return PhyMode::LE2M;
    if (s == "le500k") return PhyMode::LE500K;
    if (s == "le125k") return PhyMode::LE125K;
    throw UsageError("unknown PHY mode: " + s);
}

analysis::Scheme parse_scheme(const std::string& s) {
    if (s == "bumblebee-phase-add") return analysis::Scheme::BumblebeePhaseAdd;
    if (s == "bumblebee-square-wave") return analysis::Scheme::BumblebeeSquareWave;
    if (s == "interscatter") return analysis::Scheme::Interscatter;
    throw UsageError("unknown scheme: " + s);
}

std::vector<std::uint8_t> parse_hex(const std::string& hex) {
    if (hex.empty() || hex.size() % 2 != 0)
        throw UsageError("payload hex must be a non-empty even-length string");
    std::vector<std::uint8_t> bytes;
    bytes.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        unsigned v = 0;
        auto res = std::from_chars(hex.data() + i, hex.data() + i + 2, v, 16);
        if (res.ec != std::errc{} || res.ptr != hex.data() + i + 2)
            throw UsageError("bad hex byte in payload: " + hex.substr(i, 2));
        bytes.push_back(std::uint8_t(v));
    }
    return bytes;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open for writing: " + path);
    return f;
}

// ---- gen-ble ---------------------------------------------------------

struct GenBleArgs {
    std::string mode;
    std::string payload_hex;
    int random_bytes = 0;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_gen_ble(const GenBleArgs& a) {
    PhyMode mode = parse_mode(a.mode);
    std::vector<std::uint8_t> payload;
    if (!a.payload_hex.empty()) {
        payload = parse_hex(a.payload_hex);
    } else if (a.random_bytes > 0) {
        Rng rng(a.seed);
        payload = rng.bytes(std::size_t(a.random_bytes));
    } else {
        throw UsageError("one of --payload or --random-bytes is required");
    }
    open_out(a.out);  // validate path before computing
    Waveform w = ble::generate_ble_waveform(mode, bytes_to_bits(payload));
    iqfile::write_iq(a.out, w);
    std::cout << "samples=" << w.size() << " duration_us="
              << fmt(double(w.size()) / w.sample_rate * 1e6) << "\n";
    return 0;
}

// ---- phase-hist ------------------------------------------------------

struct PhaseHistArgs {
    std::string in;
    std::string mode;
    int random_bytes = 0;
    std::uint64_t seed = 1;
    int bins = 101;
    std::vector<double> range = {-std::numbers::pi, std::numbers::pi};
    std::string out;
};

int cmd_phase_hist(const PhaseHistArgs& a) {
    Waveform w;
    if (!a.in.empty()) {
        w = iqfile::read_iq(a.in);
    } else if (!a.mode.empty() && a.random_bytes > 0) {
        Rng rng(a.seed);
        w = ble::generate_ble_waveform(parse_mode(a.mode),
                                       bytes_to_bits(rng.bytes(std::size_t(a.random_bytes))));
    } else {
        throw UsageError("provide --in, or --mode with --random-bytes");
    }
    if (a.range.size() != 2 || !(a.range[0] < a.range[1]))
        throw UsageError("--range needs two increasing values");

    auto out = open_out(a.out);
    const auto shifts = analysis::per_chip_phase_shifts(w);
    const auto hist = analysis::histogram(shifts, a.bins, a.range[0], a.range[1]);
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        out << fmt(hist.bin_edges[i]) << "," << fmt(hist.bin_edges[i + 1]) << ","
            << hist.counts[i] << "\n";
    double frac = analysis::fraction_in_range(shifts, -1.0, 1.0);
    out << "# out_of_range=" << hist.out_of_range << "\n";
    out << "# fraction_in_minus1_plus1=" << fmt(frac) << "\n";
    std::cout << "chips=" << shifts.size() << " fraction_in_minus1_plus1=" << fmt(frac)
              << "\n";
    return 0;
}

// ---- ber-sweep -------------------------------------------------------

analysis::SweepConfig parse_sweep_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open config: " + path);
    analysis::SweepConfig cfg;
    cfg.modes.clear();
    cfg.schemes.clear();
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw UsageError(path + ":" + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && std::isspace((unsigned char)line.back())) line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key=value");
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        try {
            if (key == "modes") {
                std::stringstream ss(val);
                std::string item;
                while (std::getline(ss, item, ',')) cfg.modes.push_back(parse_mode(item));
            } else if (key == "schemes") {
                std::stringstream ss(val);
                std::string item;
                while (std::getline(ss, item, ',')) cfg.schemes.push_back(parse_scheme(item));
            } else if (key == "snr_start") {
                cfg.snr_start = std::stod(val);
            } else if (key == "snr_stop") {
                cfg.snr_stop = std::stod(val);
            } else if (key == "snr_step") {
                cfg.snr_step = std::stod(val);
            } else if (key == "tag_bytes") {
                cfg.tag_bytes = std::stoull(val);
            } else if (key == "base_seed") {
                cfg.base_seed = std::stoull(val);
            } else if (key == "trials_per_point") {
                cfg.trials_per_point = std::stoi(val);
            } else if (key == "workers") {
                cfg.workers = std::stoi(val);
            } else {
                fail("unknown key: " + key);
            }
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception&) {
            fail("bad value for " + key + ": " + val);
        }
    }
    if (cfg.modes.empty()) cfg.modes = {PhyMode::LE1M, PhyMode::LE500K, PhyMode::LE125K};
    if (cfg.schemes.empty())
        cfg.schemes = {analysis::Scheme::BumblebeePhaseAdd, analysis::Scheme::Interscatter};
    return cfg;
}

void write_sweep_csv(std::ostream& out, const analysis::SweepConfig& cfg,
                     const std::vector<analysis::BerRecord>& records) {
    out << "# generator=" << kGeneratorName << "\n";
    out << "# base_seed=" << cfg.base_seed << "\n";
    out << "# snr_grid=" << fmt(cfg.snr_start) << ".." << fmt(cfg.snr_stop) << " step "
        << fmt(cfg.snr_step) << "\n";
    out << "# tag_bytes=" << cfg.tag_bytes
        << " trials_per_point=" << cfg.trials_per_point << "\n";
    out << "mode,scheme,snr_db,bits_total,bit_errors,ber\n";
    for (const auto& r : records)
        out << r.mode << "," << r.scheme << "," << fmt(r.snr_db) << "," << r.bits_total
            << "," << r.bit_errors << "," << fmt(r.ber) << "\n";
}

int cmd_ber_sweep(const std::string& config_path, const std::string& out_path,
                  std::optional<int> workers_override) {
    analysis::SweepConfig cfg = parse_sweep_config(config_path);
    if (workers_override) cfg.workers = *workers_override;
    auto out = open_out(out_path);
    auto records = analysis::run_sweep(cfg);
    write_sweep_csv(out, cfg, records);
    std::cout << "rows=" << records.size() << "\n";
    return 0;
}

// ---- backscatter / demod --------------------------------------------

struct BackscatterArgs {
    std::string carrier;
    int tag_bytes = 0;
    std::uint64_t seed = 1;
    std::string method = "phase-add";
    std::string out;
};

int cmd_backscatter(const BackscatterArgs& a) {
    if (a.tag_bytes < 1) throw UsageError("--tag-bytes must be >= 1");
    tag::Method method;
    if (a.method == "phase-add") {
        method = tag::Method::PhaseAddition;
    } else if (a.method == "square-wave") {
        method = tag::Method::SquareWave;
    } else {
        throw UsageError("unknown method: " + a.method);
    }
    Waveform carrier = iqfile::read_iq(a.carrier);
    Rng rng(a.seed);
    BitStream tag_bits = rng.bits(std::size_t(a.tag_bytes) * 8);
    open_out(a.out);
    Waveform w;
    try {
        w = tag::bumblebee_link(carrier, tag_bits, method);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());  // carrier too short etc. is a usage error
    }
    iqfile::write_iq(a.out, w);
    std::cout << "samples=" << w.size() << " tag_hex=" << to_hex(bits_to_bytes(tag_bits))
              << "\n";
    return 0;
}

int cmd_demod(const std::string& in, const std::string& out_path) {
    Waveform w = iqfile::read_iq(in);
    auto out = open_out(out_path);
    BitStream bits = zigbee::zigbee_demodulate(w);
    out << to_hex(bits_to_bytes(bits)) << "\n";
    std::cout << "bits=" << bits.size() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bumblebee BLE-to-ZigBee backscatter simulation toolkit"};
    app.require_subcommand(1);

    GenBleArgs gen;
    auto* sc_gen = app.add_subcommand("gen-ble", "Generate a BLE carrier IQ file");
    sc_gen->add_option("--mode", gen.mode, "PHY mode: le1m|le2m|le500k|le125k")->required();
    sc_gen->add_option("--payload", gen.payload_hex, "Payload as hex bytes");
    sc_gen->add_option("--random-bytes", gen.random_bytes, "Random payload length");
    sc_gen->add_option("--seed", gen.seed, "Random payload seed");
    sc_gen->add_option("--out", gen.out, "Output IQ path")->required();

    PhaseHistArgs ph;
    auto* sc_ph = app.add_subcommand("phase-hist", "Per-chip phase-shift histogram CSV");
    sc_ph->add_option("--in", ph.in, "Input IQ path");
    sc_ph->add_option("--mode", ph.mode, "Generate a carrier of this mode instead");
    sc_ph->add_option("--random-bytes", ph.random_bytes, "Random payload length");
    sc_ph->add_option("--seed", ph.seed, "Random payload seed");
    sc_ph->add_option("--bins", ph.bins, "Bin count (default 101)");
    sc_ph->add_option("--range", ph.range, "Histogram range lo hi")->expected(2);
    sc_ph->add_option("--out", ph.out, "Output CSV path")->required();

    std::string sweep_config, sweep_out;
    std::optional<int> sweep_workers;
    auto* sc_sweep = app.add_subcommand("ber-sweep", "Run a BER-vs-SNR sweep");
    sc_sweep->add_option("--config", sweep_config, "key=value experiment config")->required();
    sc_sweep->add_option("--out", sweep_out, "Output CSV path")->required();
    int workers_flag = 0;
    auto* wopt = sc_sweep->add_option("--workers", workers_flag, "Override worker count");

    BackscatterArgs bs;
    auto* sc_bs = app.add_subcommand("backscatter", "Overwrite tag data on a carrier");
    sc_bs->add_option("--carrier", bs.carrier, "Carrier IQ path")->required();
    sc_bs->add_option("--tag-bytes", bs.tag_bytes, "Tag payload length")->required();
    sc_bs->add_option("--seed", bs.seed, "Tag bit seed");
    sc_bs->add_option("--method", bs.method, "phase-add|square-wave");
    sc_bs->add_option("--out", bs.out, "Output IQ path")->required();

    std::string demod_in, demod_out;
    auto* sc_demod = app.add_subcommand("demod", "Demodulate an IQ file to tag bits");
    sc_demod->add_option("--in", demod_in, "Input IQ path")->required();
    sc_demod->add_option("--out", demod_out, "Output bits path (hex)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*sc_gen) return cmd_gen_ble(gen);
        if (*sc_ph) return cmd_phase_hist(ph);
        if (*sc_sweep) {
            if (*wopt) sweep_workers = workers_flag;
            return cmd_ber_sweep(sweep_config, sweep_out, sweep_workers);
        }
        if (*sc_bs) return cmd_backscatter(bs);
        if (*sc_demod) return cmd_demod(demod_in, demod_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
