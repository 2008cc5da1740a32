// IQ file I/O: interleaved little-endian float32 pairs plus a key=value
// sidecar (<path>.meta) carrying sample_rate and sample count.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "bumblebee/iqcore.hpp"

namespace bumblebee::iqfile {

static_assert(std::endian::native == std::endian::little,
              "IQ file writer assumes a little-endian host");

inline std::string sidecar_path(const std::string& iq_path) {
    return iq_path + ".meta";
}

inline void write_iq(const std::string& path, const Waveform& w) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    for (const Sample& s : w.samples) {
        float iq[2] = {float(s.real()), float(s.imag())};
        f.write(reinterpret_cast<const char*>(iq), sizeof iq);
    }
    if (!f) throw std::runtime_error("write failed: " + path);

    std::ofstream m(sidecar_path(path));
    if (!m) throw std::runtime_error("cannot open for writing: " + sidecar_path(path));
    m << "sample_rate=" << std::uint64_t(w.sample_rate) << "\n";
    m << "samples=" << w.size() << "\n";
}

inline Waveform read_iq(const std::string& path) {
    Waveform w;
    w.sample_rate = kSampleRate;

    std::ifstream m(sidecar_path(path));
    if (m) {
        std::string line;
        while (std::getline(m, line)) {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(0, eq);
            std::string val = line.substr(eq + 1);
            if (key == "sample_rate") w.sample_rate = std::stod(val);
        }
    }

    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    float iq[2];
    std::uint64_t offset = 0;
    while (f.read(reinterpret_cast<char*>(iq), sizeof iq)) {
        w.samples.emplace_back(double(iq[0]), double(iq[1]));
        offset += sizeof iq;
    }
    if (f.gcount() != 0) {
        std::ostringstream err;
        err << "truncated IQ file " << path << ": " << f.gcount()
            << " trailing bytes at offset " << offset;
        throw std::runtime_error(err.str());
    }
    return w;
}

}  // namespace bumblebee::iqfile
