#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bumblebee/channel.hpp"

using namespace bumblebee;
using namespace bumblebee::channel;

namespace {

Waveform unit_tone(std::size_t n) {
    Waveform w;
    w.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        w.samples.push_back(std::polar(1.0, 0.01 * double(i)));
    return w;
}

}  // namespace

TEST_CASE("vanishing noise power leaves the waveform intact") {
    auto w = unit_tone(1000);
    auto out = awgn(w, {300.0, 42});
    for (std::size_t i = 0; i < w.size(); ++i)
        CHECK(std::abs(out.samples[i] - w.samples[i]) <= 1e-9);
}

TEST_CASE("seeded determinism is bit-exact") {
    auto w = unit_tone(5000);
    auto a = awgn(w, {5.0, 1234});
    auto b = awgn(w, {5.0, 1234});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.samples[i] == b.samples[i]);

    auto c = awgn(w, {5.0, 1235});
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) same += a.samples[i] == c.samples[i];
    CHECK(same < a.size());
}

TEST_CASE("SNR calibration within 0.1 dB at 0 and 10 dB") {
    auto w = unit_tone(100000);
    for (double snr : {0.0, 10.0}) {
        auto out = awgn(w, {snr, 7});
        double noise = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            noise += std::norm(out.samples[i] - w.samples[i]);
        noise /= double(w.size());
        double measured = 10.0 * std::log10(measure_power(w) / noise);
        CHECK(std::abs(measured - snr) < 0.1);
    }
}

TEST_CASE("noise is zero-mean with equal I/Q variance") {
    auto w = unit_tone(200000);
    auto out = awgn(w, {0.0, 99});
    double mr = 0, mi = 0, vr = 0, vi = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        Sample d = out.samples[i] - w.samples[i];
        mr += d.real();
        mi += d.imag();
        vr += d.real() * d.real();
        vi += d.imag() * d.imag();
    }
    const double n = double(w.size());
    mr /= n; mi /= n; vr /= n; vi /= n;
    const double sigma = std::sqrt(measure_power(w) / 2.0);  // per-component, 0 dB
    CHECK(std::hypot(mr, mi) < 0.01 * sigma);
    CHECK(vr / vi == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("empty waveform is rejected") {
    CHECK_THROWS_WITH(awgn(Waveform{}, {0.0, 1}), "empty waveform");
}
