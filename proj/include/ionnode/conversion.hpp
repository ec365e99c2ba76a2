// conversion.hpp - difference-frequency conversion efficiency and noise
#pragma once

namespace ionnode::conversion {

struct ConversionModel {
    double eta_max = 0.5;               // saturated device efficiency
    double p_ref = 2.4;                 // W, pump power of full conversion
    double noise_per_nm = 5000.0;       // Hz/nm of Raman background at noise_ref_power
    double noise_ref_power = 1.1;       // W
    double filter_bandwidth_hz = 200e6; // detection filter
    double wavelength = 1558e-9;        // m, converted photon
    double dark_rate = 10.0;            // Hz

    /// Chooses p_ref so that efficiency(power) == eta.
    static ConversionModel anchored(double eta_max, double power, double eta);
    void validate() const;
    double filter_bandwidth_nm() const;
};

struct ConversionResult {
    double efficiency = 0.0;
    double noise_rate = 0.0;  // Hz
    double snr = 0.0;
};

/// eta_max sin^2((pi/2) sqrt(P / p_ref))
double conversion_efficiency(const ConversionModel& model, double pump_power);

/// Raman background (linear in pump power) through the filter, plus dark counts.
double noise_rate(const ConversionModel& model, double pump_power);

/// `signal_rate` is the detected signal rate; snr = signal_rate / noise_rate.
ConversionResult conversion_snr(const ConversionModel& model, double pump_power, double signal_rate);

}  // namespace ionnode::conversion
