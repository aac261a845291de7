#include "isowall/cumulative.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "isowall/quadrature.hpp"

namespace isowall {

ScaledCumulative::ScaledCumulative(const TrigSeries& u1, double mu, double alpha,
                                   double lattice_period, int n_samples, int gl_cells)
    : mu_(mu), alpha_(alpha) {
    if (mu <= 0.0) throw std::invalid_argument("ScaledCumulative: mu_R must be positive");
    const double a = lattice_period;
    const double pref = 1.0 / std::expm1(2.0 * mu * a);
    std::vector<double> sg(static_cast<std::size_t>(n_samples));
    for (int j = 0; j < n_samples; ++j) {
        const double xj = a * j / n_samples;
        sg[j] = pref * gauss_legendre(
                           [&](double t) {
                               const double u = u1(xj + t);
                               return u * u * std::exp(2.0 * mu * t);
                           },
                           0.0, a, gl_cells);
    }
    s_series_ = TrigSeries(sg, a);
    s0_ = s_series_(0.0);
    beta_ = alpha - s0_;
    mean_s_ = s_series_.coefficient(0).real();
}

double ScaledCumulative::I(double x) const {
    return s_series_(x) + beta_ * std::exp(-2.0 * mu_ * x);
}

double stable_cumulative_integral(const TrigSeries& u1, double mu_R, double alpha,
                                  double lattice_period, double x) {
    ScaledCumulative c(u1, mu_R, alpha, lattice_period);
    return c.I(x);
}

}  // namespace isowall
