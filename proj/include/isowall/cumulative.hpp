#pragma once

#include "isowall/fourier.hpp"

namespace isowall {

// Exponentially rescaled running integral of a squared gap solution:
//
//   I(x) = e^(-2 mu x) * (alpha + int_0^x u1(t)^2 e^(2 mu t) dt)
//
// kept in the overflow-free split I(x) = s(x) + (alpha - s(0)) e^(-2 mu x),
// where s is the a-periodic steady state
//
//   s(x) = (e^(2 mu a) - 1)^(-1) * int_x^{x+a} u1(t)^2 e^(2 mu (t - x)) dt.
//
// s is sampled by composite Gauss-Legendre and stored as a trig series, so
// both pieces are cheap at any x. For x below roughly -355/mu the true I(x)
// exceeds the double range and the evaluation deliberately returns +inf;
// downstream factored forms divide by I and map that to exact zeros.
class ScaledCumulative {
  public:
    ScaledCumulative() = default;
    // u1 is the periodic/antiperiodic factor on period 2a (u1^2 then has
    // period a = lattice_period). mu must be positive.
    ScaledCumulative(const TrigSeries& u1, double mu, double alpha, double lattice_period,
                     int n_samples = 512, int gl_cells = 16);

    double I(double x) const;
    double s(double x) const { return s_series_(x); }
    double s0() const { return s0_; }
    double mean_s() const { return mean_s_; }
    double alpha() const { return alpha_; }
    double mu() const { return mu_; }
    double period() const { return s_series_.period(); }

    // dI/dx = u1(x)^2 - 2 mu I(x); exact given I, no differencing.
    double I_derivative(double u1_at_x, double x) const { return u1_at_x * u1_at_x - 2.0 * mu_ * I(x); }

  private:
    TrigSeries s_series_;
    double mu_ = 0.0;
    double alpha_ = 0.0;
    double s0_ = 0.0;
    double beta_ = 0.0;  // alpha - s0
    double mean_s_ = 0.0;
};

// One-shot evaluation of I(x) for a given u1 (period-2a trig series), growth
// rate mu_R > 0 and offset alpha.
double stable_cumulative_integral(const TrigSeries& u1, double mu_R, double alpha,
                                  double lattice_period, double x);

}  // namespace isowall
