#include "evospec/signal.hpp"

#include <cmath>
#include <numbers>

#include "evospec/errors.hpp"

namespace evospec {

std::string to_string(SignalKind k) {
    switch (k) {
        case SignalKind::RealTime:
            return "real_time";
        case SignalKind::ImaginaryTime:
            return "imaginary_time";
        case SignalKind::OneMinusH:
            return "one_minus_h";
    }
    return "?";
}

SignalKind signal_kind_from_string(const std::string& s) {
    if (s == "real_time") return SignalKind::RealTime;
    if (s == "imaginary_time") return SignalKind::ImaginaryTime;
    if (s == "one_minus_h") return SignalKind::OneMinusH;
    throw ConfigError("unknown signal kind '" + s + "'");
}

cplx energy_to_pole(double e, SignalKind kind) {
    switch (kind) {
        case SignalKind::RealTime:
            return std::polar(1.0, -e);
        case SignalKind::ImaginaryTime:
            return std::exp(-e);
        case SignalKind::OneMinusH:
            return 1.0 - e / (2.0 * std::numbers::pi);
    }
    return 0.0;
}

double pole_to_raw_energy(cplx z, SignalKind kind) {
    const double two_pi = 2.0 * std::numbers::pi;
    switch (kind) {
        case SignalKind::RealTime: {
            if (z == cplx(0)) throw DomainError("pole at zero has no phase");
            double e = -std::arg(z);
            if (e < 0.0) e += two_pi;
            if (e >= two_pi) e -= two_pi;
            return e;
        }
        case SignalKind::ImaginaryTime:
            if (z == cplx(0)) throw DomainError("pole at zero has no logarithm");
            return -std::log(std::abs(z));
        case SignalKind::OneMinusH:
            return two_pi * (1.0 - z.real());
    }
    return 0.0;
}

}  // namespace evospec
