#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "isowall/fourier.hpp"
#include "isowall/grid.hpp"

namespace isowall {

// Real potential with period a, evaluable at any x. Either the analytic
// cosine lattice V0*cos(2*pi*x/a) - E0 or a trig interpolant of uniform
// samples (at least 64 per period).
class PeriodicPotential {
  public:
    double period() const { return a_; }
    double eval(double x) const;
    double operator()(double x) const { return eval(x); }
    bool analytic() const { return analytic_.has_value(); }

    // Coefficients v_m of V(x) = sum_m v_m exp(i 2 pi m x / a), m = -n_modes..n_modes.
    // Index m + n_modes.
    std::vector<std::complex<double>> fourier_coefficients(int n_modes) const;

    friend PeriodicPotential make_mathieu(double V0, double a, double E0);
    friend PeriodicPotential make_sampled(const std::vector<double>& samples, double a);

  private:
    struct Cosine {
        double V0, E0;
    };
    double a_ = 0.0;
    std::optional<Cosine> analytic_;
    TrigSeries series_;
};

PeriodicPotential make_mathieu(double V0, double a, double E0);
PeriodicPotential make_sampled(const std::vector<double>& samples, double a);

// Non-periodic potential on a finite window with known periodic asymptotics.
struct InterfacePotential {
    SimulationWindow window;
    std::vector<double> samples;
    PeriodicPotential left_lattice;
    PeriodicPotential right_lattice;
    double wall_center = 0.0;
};

// Abrupt junction: left lattice for x < 0, right lattice for x >= 0. The
// partial-reflection control against which the synthesized wall is compared.
InterfacePotential step_interface(const PeriodicPotential& left, const PeriodicPotential& right,
                                  const SimulationWindow& window);

// The same lattice everywhere; baseline for interface-free propagation.
InterfacePotential uniform_interface(const PeriodicPotential& lattice,
                                     const SimulationWindow& window);

}  // namespace isowall
