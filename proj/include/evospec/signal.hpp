#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "evospec/linalg.hpp"

namespace evospec {

enum class SignalKind { RealTime, ImaginaryTime, OneMinusH };

// Physical energy from the raw pole energy: E = (raw / step - rate_correction) / scale + offset.
struct EnergyMap {
    double step = 1.0;
    double offset = 0.0;
    double scale = 1.0;
    double rate_correction = 0.0;
};

struct Signal {
    std::vector<cplx> values;  // y(0..K)
    SignalKind kind = SignalKind::ImaginaryTime;
    EnergyMap map;
    std::vector<std::size_t> num_samples;  // per k, empty for exact signals

    int K() const { return static_cast<int>(values.size()) - 1; }
};

std::string to_string(SignalKind k);
SignalKind signal_kind_from_string(const std::string& s);

// Pole for energy E (raw units): e^{-iE}, e^{-E}, 1 - E/2pi.
cplx energy_to_pole(double e, SignalKind kind);
// Raw energy for a pole, before the energy map.
double pole_to_raw_energy(cplx z, SignalKind kind);

}  // namespace evospec
