// histogram.hpp - photon arrival-time model: Gaussian jitter convolved with
// exponential decay, and its maximum-likelihood fit
//
// Times may be in any unit as long as samples and parameters agree.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace ionnode::histogram {

struct HistogramModel {
    double latency = 0.0;       // Gaussian centre
    double jitter_sigma = 1.0;  // Gaussian width
    double decay_tau = 1.0;     // exponential time constant
    double amplitude = 1.0;     // events in the window
    std::optional<std::pair<double, double>> window;
};

double emg_pdf(double t, double latency, double sigma, double tau);
double emg_cdf(double t, double latency, double sigma, double tau);

/// Density of the model at t (unit area over the real line, no truncation).
double histogram_pdf(const HistogramModel& model, double t);

struct HistogramFit {
    HistogramModel model;
    double latency_error = 0.0;
    double sigma_error = 0.0;
    double tau_error = 0.0;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Set when sigma collapsed toward zero or the curvature is singular.
    bool degenerate = false;
};

/// Maximum-likelihood fit, truncated to `window` when given. Samples outside
/// the window are rejected.
HistogramFit fit_histogram(const std::vector<double>& samples,
                           std::optional<std::pair<double, double>> window = std::nullopt);

/// Draws latency + sigma N(0,1) + tau Exp(1).
std::vector<double> sample_emg(double latency, double sigma, double tau, std::size_t n, std::uint64_t seed);

}  // namespace ionnode::histogram
