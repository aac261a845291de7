#include "isowall/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace isowall {

double PeriodicPotential::eval(double x) const {
    if (analytic_) return analytic_->V0 * std::cos(2.0 * M_PI * x / a_) - analytic_->E0;
    return series_(x);
}

std::vector<std::complex<double>> PeriodicPotential::fourier_coefficients(int n_modes) const {
    std::vector<std::complex<double>> v(2 * n_modes + 1, 0.0);
    if (analytic_) {
        v[n_modes] = -analytic_->E0;
        if (n_modes >= 1) {
            v[n_modes + 1] = 0.5 * analytic_->V0;
            v[n_modes - 1] = 0.5 * analytic_->V0;
        }
        return v;
    }
    for (int m = -n_modes; m <= n_modes; ++m) v[m + n_modes] = series_.coefficient(m);
    return v;
}

PeriodicPotential make_mathieu(double V0, double a, double E0) {
    if (a <= 0.0) throw std::invalid_argument("make_mathieu: period must be positive");
    PeriodicPotential p;
    p.a_ = a;
    p.analytic_ = PeriodicPotential::Cosine{V0, E0};
    return p;
}

PeriodicPotential make_sampled(const std::vector<double>& samples, double a) {
    if (a <= 0.0) throw std::invalid_argument("make_sampled: period must be positive");
    if (samples.size() < 64)
        throw std::invalid_argument("make_sampled: need at least 64 samples per period");
    PeriodicPotential p;
    p.a_ = a;
    p.series_ = TrigSeries(samples, a);
    return p;
}

InterfacePotential step_interface(const PeriodicPotential& left, const PeriodicPotential& right,
                                  const SimulationWindow& window) {
    if (std::abs(left.period() - right.period()) > 1e-12 * left.period())
        throw std::invalid_argument("step_interface: lattices must share the period");
    InterfacePotential ip{window, {}, left, right, 0.0};
    ip.samples.resize(window.n_points);
    for (std::size_t i = 0; i < window.n_points; ++i) {
        const double x = window.x(i);
        ip.samples[i] = x < 0.0 ? left.eval(x) : right.eval(x);
    }
    return ip;
}

InterfacePotential uniform_interface(const PeriodicPotential& lattice,
                                     const SimulationWindow& window) {
    return step_interface(lattice, lattice, window);
}

}  // namespace isowall
