#include "ionnode/conversion.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ionnode::conversion {

ConversionModel ConversionModel::anchored(double eta_max, double power, double eta) {
    if (!(eta_max > 0.0 && eta_max <= 1.0)) throw std::invalid_argument("eta_max: must be in (0, 1]");
    if (!(eta >= 0.0 && eta <= eta_max)) throw std::invalid_argument("anchor efficiency exceeds eta_max");
    if (!(power > 0.0)) throw std::invalid_argument("anchor power must be > 0");
    ConversionModel m;
    m.eta_max = eta_max;
    const double x = std::asin(std::sqrt(eta / eta_max)) / (std::numbers::pi / 2.0);
    m.p_ref = power / (x * x);
    return m;
}

void ConversionModel::validate() const {
    if (!(eta_max >= 0.0 && eta_max <= 1.0)) throw std::invalid_argument("eta_max: must be in [0, 1]");
    if (!(p_ref > 0.0)) throw std::invalid_argument("p_ref: must be > 0");
    if (!(noise_per_nm >= 0.0)) throw std::invalid_argument("noise_per_nm: must be >= 0");
    if (!(noise_ref_power > 0.0)) throw std::invalid_argument("noise_ref_power: must be > 0");
    if (!(filter_bandwidth_hz >= 0.0)) throw std::invalid_argument("filter_bandwidth_hz: must be >= 0");
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength: must be > 0");
    if (!(dark_rate >= 0.0)) throw std::invalid_argument("dark_rate: must be >= 0");
}

double ConversionModel::filter_bandwidth_nm() const {
    constexpr double c = 299792458.0;
    return wavelength * wavelength * filter_bandwidth_hz / c * 1e9;
}

double conversion_efficiency(const ConversionModel& m, double pump_power) {
    if (!(pump_power >= 0.0)) throw std::invalid_argument("conversion_efficiency: negative pump power");
    const double s = std::sin(std::numbers::pi / 2.0 * std::sqrt(pump_power / m.p_ref));
    return m.eta_max * s * s;
}

double noise_rate(const ConversionModel& m, double pump_power) {
    if (!(pump_power >= 0.0)) throw std::invalid_argument("noise_rate: negative pump power");
    return m.noise_per_nm * (pump_power / m.noise_ref_power) * m.filter_bandwidth_nm() + m.dark_rate;
}

ConversionResult conversion_snr(const ConversionModel& m, double pump_power, double signal_rate) {
    m.validate();
    if (!(signal_rate >= 0.0)) throw std::invalid_argument("conversion_snr: negative signal rate");
    ConversionResult r;
    r.efficiency = conversion_efficiency(m, pump_power);
    r.noise_rate = noise_rate(m, pump_power);
    r.snr = r.noise_rate > 0.0 ? signal_rate / r.noise_rate : std::numeric_limits<double>::infinity();
    return r;
}

}  // namespace ionnode::conversion
