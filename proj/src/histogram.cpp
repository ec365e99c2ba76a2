#include "ionnode/histogram.hpp"

#include "ionnode/numerics.hpp"
#include "ionnode/rng.hpp"

#include <Eigen/Dense>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace ionnode::histogram {

namespace {

// exp(sigma^2/2tau^2 - (t-mu)/tau) Phi((t-mu)/sigma - sigma/tau), evaluated
// without overflow on either side.
double tail_term(double t, double mu, double sigma, double tau) {
    const double u = (t - mu) / sigma;
    const double z = (sigma / tau - u) / std::sqrt(2.0);
    if (z >= 0.0) return 0.5 * std::exp(-0.5 * u * u) * erfcx(z);
    return std::exp(0.5 * (sigma / tau) * (sigma / tau) - (t - mu) / tau) * 0.5 * std::erfc(z);
}

struct FitData {
    const std::vector<double>* samples;
    std::optional<std::pair<double, double>> window;
};

double negative_ll(double mu, double sigma, double tau, const FitData& d) {
    if (!(sigma > 0.0) || !(tau > 0.0)) return std::numeric_limits<double>::infinity();
    double ll = 0.0;
    for (double t : *d.samples) ll += std::log(std::max(emg_pdf(t, mu, sigma, tau), std::numeric_limits<double>::min()));
    if (d.window) {
        const double z = emg_cdf(d.window->second, mu, sigma, tau) - emg_cdf(d.window->first, mu, sigma, tau);
        ll -= static_cast<double>(d.samples->size()) * std::log(std::max(z, std::numeric_limits<double>::min()));
    }
    return -ll;
}

double simplex_objective(const gsl_vector* x, void* params) {
    const auto& d = *static_cast<const FitData*>(params);
    return negative_ll(gsl_vector_get(x, 0), std::exp(gsl_vector_get(x, 1)), std::exp(gsl_vector_get(x, 2)), d);
}

}  // namespace

double emg_pdf(double t, double latency, double sigma, double tau) {
    if (!(sigma > 0.0) || !(tau > 0.0)) throw std::invalid_argument("emg_pdf: sigma and tau must be > 0");
    return tail_term(t, latency, sigma, tau) / tau;
}

double emg_cdf(double t, double latency, double sigma, double tau) {
    if (!(sigma > 0.0) || !(tau > 0.0)) throw std::invalid_argument("emg_cdf: sigma and tau must be > 0");
    return normal_cdf((t - latency) / sigma) - tail_term(t, latency, sigma, tau);
}

double histogram_pdf(const HistogramModel& m, double t) { return emg_pdf(t, m.latency, m.jitter_sigma, m.decay_tau); }

HistogramFit fit_histogram(const std::vector<double>& samples, std::optional<std::pair<double, double>> window) {
    if (samples.size() < 10) throw std::invalid_argument("fit_histogram: need at least 10 samples");
    if (window && !(window->first < window->second)) throw std::invalid_argument("fit_histogram: empty window");
    double mean = 0.0;
    for (double t : samples) {
        if (window && (t < window->first || t > window->second))
            throw std::invalid_argument("fit_histogram: sample outside the window");
        mean += t;
    }
    const auto n = static_cast<double>(samples.size());
    mean /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double t : samples) {
        const double d = t - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    const double sd = std::sqrt(m2);
    if (!(sd > 0.0)) throw std::domain_error("fit_histogram: samples have zero spread");

    // Moment starting point: skewness fixes tau.
    const double skew = std::clamp(m3 / (sd * sd * sd), 0.05, 1.9);
    double tau0 = sd * std::cbrt(skew / 2.0);
    double sigma0 = std::sqrt(std::max(m2 - tau0 * tau0, 0.01 * m2));
    double mu0 = mean - tau0;

    gsl_set_error_handler_off();
    FitData data{&samples, window};
    gsl_multimin_function f{&simplex_objective, 3, &data};
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(3), &gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(3), &gsl_vector_free);
    gsl_vector_set(x.get(), 0, mu0);
    gsl_vector_set(x.get(), 1, std::log(sigma0));
    gsl_vector_set(x.get(), 2, std::log(tau0));
    gsl_vector_set(step.get(), 0, 0.1 * sd);
    gsl_vector_set(step.get(), 1, 0.1);
    gsl_vector_set(step.get(), 2, 0.1);

    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> solver(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3), &gsl_multimin_fminimizer_free);
    gsl_multimin_fminimizer_set(solver.get(), &f, x.get(), step.get());

    HistogramFit fit;
    int status = GSL_CONTINUE;
    for (fit.iterations = 1; fit.iterations <= 5000 && status == GSL_CONTINUE; ++fit.iterations) {
        if (gsl_multimin_fminimizer_iterate(solver.get())) break;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver.get()), 1e-9);
    }
    fit.converged = status == GSL_SUCCESS;

    const gsl_vector* best = gsl_multimin_fminimizer_x(solver.get());
    const double mu = gsl_vector_get(best, 0);
    const double sigma = std::exp(gsl_vector_get(best, 1));
    const double tau = std::exp(gsl_vector_get(best, 2));
    fit.model = {mu, sigma, tau, n, window};
    fit.log_likelihood = -gsl_multimin_fminimizer_minimum(solver.get());

    // Curvature of the negative log-likelihood in (mu, sigma, tau).
    const double theta[3] = {mu, sigma, tau};
    const double h[3] = {1e-3 * sigma, 1e-3 * sigma, 1e-3 * tau};
    auto nll = [&](const double* p) { return negative_ll(p[0], p[1], p[2], data); };
    Eigen::Matrix3d hess;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double p[3];
            auto eval = [&](double si, double sj) {
                std::copy(theta, theta + 3, p);
                p[i] += si * h[i];
                p[j] += sj * h[j];
                return nll(p);
            };
            const double v = (eval(1, 1) - eval(1, -1) - eval(-1, 1) + eval(-1, -1)) / (4.0 * h[i] * h[j]);
            hess(i, j) = hess(j, i) = v;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(hess);
    fit.degenerate = sigma < 1e-6 * tau || eig.eigenvalues().minCoeff() <= 0.0;
    if (!fit.degenerate) {
        const Eigen::Matrix3d cov = hess.inverse();
        fit.latency_error = std::sqrt(cov(0, 0));
        fit.sigma_error = std::sqrt(cov(1, 1));
        fit.tau_error = std::sqrt(cov(2, 2));
    }
    return fit;
}

std::vector<double> sample_emg(double latency, double sigma, double tau, std::size_t n, std::uint64_t seed) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng(seed, i);
        out[i] = latency + sigma * rng.normal() + rng.exponential(1.0 / tau);
    }
    return out;
}

}  // namespace ionnode::histogram
