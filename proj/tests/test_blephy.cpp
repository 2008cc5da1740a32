#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bumblebee/blephy.hpp"
#include "bumblebee/zigbeephy.hpp"

using namespace bumblebee;
using namespace bumblebee::ble;

namespace {

// Independent CRC oracle: GF(2) long division of (msg || 24 zeros) with
// the preset register XORed into the leading bits.
std::uint32_t crc24_longdiv(const BitStream& bits, std::uint32_t init) {
    static const int poly[25] = {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                 1, 1, 0, 0, 1, 0, 1, 1, 0, 1, 1};
    std::vector<int> work(bits.begin(), bits.end());
    work.insert(work.end(), 24, 0);
    for (int i = 0; i < 24; ++i)
        work[std::size_t(i)] ^= int((init >> (23 - i)) & 1u);
    for (std::size_t i = 0; i + 24 < work.size(); ++i)
        if (work[i])
            for (int j = 0; j < 25; ++j) work[i + std::size_t(j)] ^= poly[j];
    std::uint32_t reg = 0;
    for (std::size_t i = work.size() - 24; i < work.size(); ++i)
        reg = (reg << 1) | std::uint32_t(work[i]);
    return reg;
}

double steady_slope(const Waveform& w, int sps) {
    auto phi = unwrap_phase(w);
    // average per-symbol advance over the settled middle
    std::size_t a = phi.size() / 4, b = 3 * phi.size() / 4;
    return (phi[b] - phi[a]) / (double(b - a) / sps);
}

}  // namespace

TEST_CASE("gfsk steady-state slope is pi*h per symbol") {
    BitStream ones(20, 1);
    auto w = gfsk_modulate(ones, gfsk_params_for(PhyMode::LE1M));
    CHECK(w.size() == 20 * 16);
    CHECK(steady_slope(w, 16) == doctest::Approx(std::numbers::pi * 0.5).epsilon(1e-9));

    BitStream zeros(20, 0);
    w = gfsk_modulate(zeros, gfsk_params_for(PhyMode::LE1M));
    CHECK(steady_slope(w, 16) == doctest::Approx(-std::numbers::pi * 0.5).epsilon(1e-9));
}

TEST_CASE("gfsk is constant envelope") {
    Rng rng(2);
    auto w = gfsk_modulate(rng.bits(128), gfsk_params_for(PhyMode::LE2M));
    for (const Sample& s : w.samples) CHECK(std::abs(s) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(measure_power(w) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS(gfsk_modulate({}, {}));
}

TEST_CASE("alternating bits never reach the full pi*h advance") {
    GfskParams p = gfsk_params_for(PhyMode::LE1M);
    BitStream alt;
    for (int i = 0; i < 40; ++i) alt.push_back(Bit(i & 1));
    auto phi = unwrap_phase(gfsk_modulate(alt, p));
    const double full = std::numbers::pi * p.modulation_index;
    double peak = 0.0;
    for (std::size_t k = 10; k + 1 < 30; ++k) {
        double adv = std::abs(phi[(k + 1) * 16] - phi[k * 16]);
        peak = std::max(peak, adv);
    }
    CHECK(peak < full);

    // Oracle: integrate the Gaussian frequency pulse overlap directly on
    // a fine grid; the per-symbol advance of an alternating train is
    // pi*h * integral over one symbol of the filtered +-1 sequence.
    const int res = 2000;
    const double k = 2.0 * std::numbers::pi * std::numbers::pi * p.bt * p.bt / std::log(2.0);
    auto g = [&](double t) { return std::exp(-k * t * t); };
    double norm = 0.0;
    for (int i = -4 * res; i <= 4 * res; ++i) norm += g(double(i) / res);
    double advance = 0.0;
    for (int i = 0; i < res; ++i) {
        double t = double(i) / res;  // within symbol 0 of ...0101...
        double f = 0.0;
        for (int j = -4 * res; j <= 4 * res; ++j) {
            double tau = t - double(j) / res;
            int sym = int(std::floor(tau));
            double sign = ((sym % 2) + 2) % 2 == 0 ? 1.0 : -1.0;
            f += sign * g(double(j) / res);
        }
        advance += full * (f / norm) / res;
    }
    CHECK(peak == doctest::Approx(std::abs(advance)).epsilon(2e-2));
}

TEST_CASE("conv_encode known answers") {
    CHECK(conv_encode({}).empty());
    BitStream zeros(7, 0);
    auto out = conv_encode(zeros);
    CHECK(out == BitStream(14, 0));

    // impulse response per the generator taps
    CHECK(conv_encode({1, 0, 0, 0}) == BitStream{1, 1, 1, 0, 1, 1, 1, 1});
}

TEST_CASE("conv_encode is linear and TERM-flushes") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = rng.bits(33), b = rng.bits(33);
        BitStream x(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) x[i] = Bit(a[i] ^ b[i]);
        auto ea = conv_encode(a), eb = conv_encode(b), ex = conv_encode(x);
        for (std::size_t i = 0; i < ex.size(); ++i) CHECK(ex[i] == Bit(ea[i] ^ eb[i]));

        ConvEncoder enc;
        auto with_term = a;
        with_term.insert(with_term.end(), {0, 0, 0});
        enc.encode(with_term);
        CHECK(enc.state_is_zero());
    }
}

TEST_CASE("pattern_map schemes") {
    CHECK(pattern_map({0, 1}, CodingScheme::S2) == BitStream{0, 1});
    CHECK(pattern_map({0}, CodingScheme::S8) == BitStream{0, 0, 1, 1});
    CHECK(pattern_map({1, 0}, CodingScheme::S8) == BitStream{1, 1, 0, 0, 0, 0, 1, 1});
}

TEST_CASE("pattern_map S8 output is DC balanced") {
    Rng rng(6);
    auto out = pattern_map(rng.bits(97), CodingScheme::S8);
    std::size_t ones = 0;
    for (Bit b : out) ones += b;
    CHECK(ones == out.size() / 2);
}

TEST_CASE("crc24 against independent long-division oracle") {
    CHECK(crc24_register({}, 0x555555) == 0x555555);

    // fixed 16-byte PDU: bytes 0x00..0x0F
    std::vector<std::uint8_t> pdu(16);
    for (int i = 0; i < 16; ++i) pdu[std::size_t(i)] = std::uint8_t(i);
    auto bits = bytes_to_bits(pdu);
    CHECK(crc24_register(bits, 0x555555) == 0x67F397);  // frozen golden
    CHECK(crc24_register(bits, 0x555555) == crc24_longdiv(bits, 0x555555));

    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        auto msg = rng.bits(24 + (rng.next_u64() % 100));
        std::uint32_t init = std::uint32_t(rng.next_u64()) & 0xFFFFFF;
        CHECK(crc24_register(msg, init) == crc24_longdiv(msg, init));
        // append-and-recheck drives the register to zero
        auto with_crc = msg;
        append(with_crc, crc24(msg, init));
        CHECK(crc24_register(with_crc, init) == 0);
    }
}

TEST_CASE("whiten is involutive, zero input exposes the LFSR") {
    Rng rng(10);
    for (int ch : {0, 5, 37, 39}) {
        auto m = rng.bits(200);
        CHECK(whiten(whiten(m, ch), ch) == m);
    }
    CHECK_THROWS(whiten({1, 0}, 40));
    CHECK_THROWS(whiten({1, 0}, -1));

    // channel 0 LFSR sequence, hand-stepped
    BitStream zeros(8, 0);
    CHECK(whiten(zeros, 0) == BitStream{0, 0, 0, 0, 0, 0, 1, 0});
}

TEST_CASE("coded packet symbol counts") {
    CodedPacketConfig cfg;
    cfg.pdu = bytes_to_bits({0xA5});

    cfg.ci = CodingScheme::S8;
    CHECK(build_coded_packet(cfg).size() == 656);
    cfg.ci = CodingScheme::S2;
    CHECK(build_coded_packet(cfg).size() == 446);

    // FEC block 1 is fixed at 296 symbols: check via a 2-byte PDU too
    cfg.pdu = bytes_to_bits({0x12, 0x34});
    cfg.ci = CodingScheme::S2;
    CHECK(build_coded_packet(cfg).size() == std::size_t(80 + 296 + (16 + 24 + 3) * 2));

    cfg.pdu.clear();
    CHECK_THROWS(build_coded_packet(cfg));
}

TEST_CASE("LE coded payload rates: 2 and 8 us per payload bit") {
    // FEC block 2 symbol counts per payload bit at 1 Msym/s
    CodedPacketConfig cfg;
    cfg.pdu = bytes_to_bits({0x00});
    cfg.ci = CodingScheme::S2;
    auto s2 = build_coded_packet(cfg).size();
    cfg.ci = CodingScheme::S8;
    auto s8 = build_coded_packet(cfg).size();
    // difference per scheme comes only from block 2: S8 spends 4x symbols
    CHECK(s8 - 376 == 4 * (s2 - 376));  // 376 = preamble + block 1
}

TEST_CASE("generate_ble_waveform lengths and envelope") {
    Rng rng(12);
    auto payload = bytes_to_bits(rng.bytes(1));
    auto w = generate_ble_waveform(PhyMode::LE125K, payload);
    CHECK(w.size() == 656 * 16);
    CHECK(w.sample_rate == kSampleRate);
    CHECK(measure_power(w) == doctest::Approx(1.0).epsilon(1e-9));

    w = generate_ble_waveform(PhyMode::LE2M, payload);
    CHECK(w.sample_rate == kSampleRate);
    CHECK(measure_power(w) == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS(generate_ble_waveform(PhyMode::LE1M, {}));
}

TEST_CASE("LE1M per-chip shifts concentrate in [-1, 1]") {
    Rng rng(13);
    auto w = ble::generate_carrier(PhyMode::LE1M, 12000 * 8, rng);
    auto shifts = zigbee::per_chip_phase_shifts(w);
    REQUIRE(shifts.size() >= 10000);
    std::size_t in = 0;
    for (double s : shifts) in += (s >= -1.0 && s <= 1.0);
    CHECK(double(in) / double(shifts.size()) >= 0.99);
}

TEST_CASE("LE2M per-chip shift support extends beyond 1 rad") {
    Rng rng(14);
    auto w = ble::generate_carrier(PhyMode::LE2M, 12000 * 8, rng);
    auto shifts = zigbee::per_chip_phase_shifts(w);
    double peak = 0.0;
    for (double s : shifts) peak = std::max(peak, std::abs(s));
    CHECK(peak > 1.0);
}

TEST_CASE("gen is deterministic for equal payloads") {
    auto payload = bytes_to_bits({0xDE, 0xAD});
    auto a = generate_ble_waveform(PhyMode::LE500K, payload);
    auto b = generate_ble_waveform(PhyMode::LE500K, payload);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.samples[i] == b.samples[i]);
}
