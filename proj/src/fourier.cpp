#include "isowall/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

namespace isowall {
namespace {

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in) {
    const int n = static_cast<int>(in.size());
    std::vector<std::complex<double>> out(in.size());
    fftw_plan plan = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
        FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

}  // namespace

TrigSeries::TrigSeries(const std::vector<double>& samples, double period, double drop_tol)
    : period_(period), n_samples_(samples.size()) {
    if (period <= 0.0) throw std::invalid_argument("TrigSeries: period must be positive");
    if (samples.size() < 2) throw std::invalid_argument("TrigSeries: need at least 2 samples");
    const std::size_t n = samples.size();
    std::vector<std::complex<double>> in(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = samples[i];
    auto spec = dft(in);

    // One-sided coefficients; the Nyquist bin (even n) carries a pure cosine,
    // representable as a half-weight entry at m = n/2.
    const std::size_t m_max = n / 2;
    coef_.assign(m_max + 1, 0.0);
    coef_[0] = spec[0] / static_cast<double>(n);
    for (std::size_t m = 1; m < (n + 1) / 2; ++m) coef_[m] = spec[m] / static_cast<double>(n);
    if (n % 2 == 0) coef_[m_max] = 0.5 * spec[m_max].real() / static_cast<double>(n);

    double peak = 0.0;
    for (const auto& c : coef_) peak = std::max(peak, std::abs(c));
    std::size_t keep = coef_.size();
    while (keep > 1 && std::abs(coef_[keep - 1]) <= drop_tol * peak) --keep;
    coef_.resize(keep);
}

TrigSeries TrigSeries::constant(double value, double period) {
    TrigSeries s;
    s.period_ = period;
    s.n_samples_ = 2;
    s.coef_ = {std::complex<double>(value, 0.0)};
    return s;
}

double TrigSeries::operator()(double x) const {
    const double w0 = 2.0 * M_PI / period_;
    const std::complex<double> z = std::polar(1.0, w0 * x);
    std::complex<double> zm = z;
    double acc = coef_[0].real();
    for (std::size_t m = 1; m < coef_.size(); ++m) {
        acc += 2.0 * (coef_[m].real() * zm.real() - coef_[m].imag() * zm.imag());
        zm *= z;
    }
    return acc;
}

double TrigSeries::derivative(double x) const {
    const double w0 = 2.0 * M_PI / period_;
    const std::complex<double> z = std::polar(1.0, w0 * x);
    std::complex<double> zm = z;
    double acc = 0.0;
    for (std::size_t m = 1; m < coef_.size(); ++m) {
        // d/dx 2*Re(c zm) = 2*Re(i m w0 c zm)
        const std::complex<double> c = coef_[m] * std::complex<double>(0.0, m * w0);
        acc += 2.0 * (c.real() * zm.real() - c.imag() * zm.imag());
        zm *= z;
    }
    return acc;
}

double TrigSeries::second_derivative(double x) const {
    const double w0 = 2.0 * M_PI / period_;
    const std::complex<double> z = std::polar(1.0, w0 * x);
    std::complex<double> zm = z;
    double acc = 0.0;
    for (std::size_t m = 1; m < coef_.size(); ++m) {
        const double f = -(m * w0) * (m * w0);
        acc += 2.0 * f * (coef_[m].real() * zm.real() - coef_[m].imag() * zm.imag());
        zm *= z;
    }
    return acc;
}

double TrigSeries::mean_square() const {
    double acc = coef_[0].real() * coef_[0].real();
    for (std::size_t m = 1; m < coef_.size(); ++m) acc += 2.0 * std::norm(coef_[m]);
    return acc;
}

std::complex<double> TrigSeries::coefficient(int m) const {
    const std::size_t am = static_cast<std::size_t>(m < 0 ? -m : m);
    if (am >= coef_.size()) return 0.0;
    return m < 0 ? std::conj(coef_[am]) : coef_[am];
}

TrigSeries TrigSeries::scaled(double factor) const {
    TrigSeries s = *this;
    for (auto& c : s.coef_) c *= factor;
    return s;
}

ComplexTrigSeries::ComplexTrigSeries(const std::vector<std::complex<double>>& samples,
                                     double period, double drop_tol)
    : period_(period) {
    if (period <= 0.0) throw std::invalid_argument("ComplexTrigSeries: period must be positive");
    if (samples.size() < 2) throw std::invalid_argument("ComplexTrigSeries: need >= 2 samples");
    const std::size_t n = samples.size();
    auto spec = dft(samples);
    max_mode_ = static_cast<int>(n / 2);
    coef_.assign(2 * max_mode_ + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        int m = static_cast<int>(j) <= max_mode_ ? static_cast<int>(j)
                                                 : static_cast<int>(j) - static_cast<int>(n);
        if (m < -max_mode_) continue;  // even n: bin n/2 already taken as +max_mode_
        coef_[m + max_mode_] += spec[j] / static_cast<double>(n);
    }
    double peak = 0.0;
    for (const auto& c : coef_) peak = std::max(peak, std::abs(c));
    int keep = max_mode_;
    while (keep > 0 && std::abs(coef_[max_mode_ + keep]) <= drop_tol * peak &&
           std::abs(coef_[max_mode_ - keep]) <= drop_tol * peak)
        --keep;
    if (keep < max_mode_) {
        std::vector<std::complex<double>> trimmed(coef_.begin() + (max_mode_ - keep),
                                                  coef_.begin() + (max_mode_ + keep + 1));
        coef_ = std::move(trimmed);
        max_mode_ = keep;
    }
}

std::complex<double> ComplexTrigSeries::operator()(double x) const {
    const double w0 = 2.0 * M_PI / period_;
    const std::complex<double> z = std::polar(1.0, w0 * x);
    std::complex<double> zm = std::polar(1.0, -w0 * x * max_mode_);
    std::complex<double> acc = 0.0;
    for (const auto& c : coef_) {
        acc += c * zm;
        zm *= z;
    }
    return acc;
}

}  // namespace isowall
