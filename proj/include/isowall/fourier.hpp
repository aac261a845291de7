#pragma once

#include <complex>
#include <vector>

namespace isowall {

// Trigonometric interpolant of a real function sampled uniformly over one
// period: f(x) = c0 + 2*Re sum_{m=1..M} c_m exp(i m w0 x), w0 = 2*pi/period.
// Evaluation is valid at any real x (the series is the smooth periodic
// extension). Coefficients below drop_tol * max|c| are discarded, so the
// evaluation cost tracks the actual spectral content, not the sample count.
class TrigSeries {
  public:
    TrigSeries() = default;
    TrigSeries(const std::vector<double>& samples, double period, double drop_tol = 1e-15);

    static TrigSeries constant(double value, double period);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    // Mean of f^2 over one period, from the coefficients (Parseval).
    double mean_square() const;

    // Coefficient for signed mode index m (c_{-m} = conj(c_m)).
    std::complex<double> coefficient(int m) const;
    int max_mode() const { return static_cast<int>(coef_.size()) - 1; }
    double period() const { return period_; }
    std::size_t sample_count() const { return n_samples_; }

    // Multiplies the represented function by a constant.
    TrigSeries scaled(double factor) const;

  private:
    double period_ = 0.0;
    std::size_t n_samples_ = 0;
    std::vector<std::complex<double>> coef_;  // modes 0..M
};

// Same idea for complex-valued periodic data (full signed spectrum).
class ComplexTrigSeries {
  public:
    ComplexTrigSeries() = default;
    ComplexTrigSeries(const std::vector<std::complex<double>>& samples, double period,
                      double drop_tol = 1e-15);

    std::complex<double> operator()(double x) const;
    double period() const { return period_; }

  private:
    double period_ = 0.0;
    std::vector<std::complex<double>> coef_;  // signed modes -M..M, index m+M
    int max_mode_ = 0;
};

}  // namespace isowall
