#pragma once

#include <complex>
#include <vector>

#include "isowall/cumulative.hpp"
#include "isowall/floquet.hpp"
#include "isowall/grid.hpp"
#include "isowall/potential.hpp"

namespace isowall {

// W(x) = chi'/chi = mu_R + u1'/u1, a-periodic, defined only for nodeless chi.
// Satisfies the Riccati relation W^2 + W' = V1.
struct Superpotential {
    TrigSeries w;  // period a
    double mu_R = 0.0;
    double eval(double x) const { return w(x); }
    double derivative(double x) const { return w.derivative(x); }
    double period_mean() const { return w.coefficient(0).real(); }
};

// Throws std::domain_error when chi has a node.
Superpotential superpotential(const EvanescentSolution& chi);

// V2 = V1 - 2 W' = 2 W^2 - V1 (same period, isospectral away from E=0).
PeriodicPotential partner_potential(const PeriodicPotential& P, const EvanescentSolution& chi);

// alpha0 = int_{-inf}^0 chi^2 dx; equals the periodic steady state s(0) by
// geometric summation of the period cells.
double alpha_min(const EvanescentSolution& chi);

struct WallFamilyParam {
    double alpha = 0.0;
    double alpha0 = 0.0;
    WallFamilyParam(double alpha_, double alpha0_) : alpha(alpha_), alpha0(alpha0_) {
        if (!(alpha > alpha0))
            throw std::domain_error("WallFamilyParam: require alpha > alpha0");
    }
};

// The one-parameter transparent wall V3 = V1 + F, evaluated only through the
// node-safe factored pieces
//   F   = 2 u1^4 / I^2 - 4 u1 (u1' + mu u1) / I,
//   g_s = u1 / (s e^(mu x) + (alpha - s0) e^(-mu x))    (up to normalization),
// with I the rescaled cumulative integral. No expression here ever divides by
// chi or f, so nodal u1 (the pi/a class) costs nothing.
class Wall {
  public:
    Wall(const PeriodicPotential& base, const EvanescentSolution& chi, double alpha);

    double F(double x) const;
    double V3(double x) const { return base_.eval(x) + F(x); }
    double operator()(double x) const { return V3(x); }

    // Unnormalized surface amplitude u1 e^(-mu x) / I(x); positive-denominator
    // form, finite (or exactly zero) at any x representable in double.
    double surface_amplitude(double x) const;

    double alpha() const { return param_.alpha; }
    double alpha0() const { return param_.alpha0; }
    // Crossover of the two denominator scales; the surface state peaks within
    // about one period of this point.
    double center() const;

    const ScaledCumulative& cumulative() const { return cum_; }
    const EvanescentSolution& chi() const { return chi_; }
    const PeriodicPotential& base() const { return base_; }

  private:
    PeriodicPotential base_;
    EvanescentSolution chi_;
    WallFamilyParam param_;
    ScaledCumulative cum_;
};

// Samples a Wall over the window. Requires alpha > alpha_min(chi) and at
// least 32 window points per lattice period.
InterfacePotential wall_potential(const PeriodicPotential& P, const EvanescentSolution& chi,
                                  double alpha, const SimulationWindow& window);

// V1 + F0, the right asymptote of every wall in the family (alpha-free).
PeriodicPotential asymptotic_lattice(const PeriodicPotential& P, const EvanescentSolution& chi);

// Normalizable E=0 eigenstate of the wall Hamiltonian.
struct SurfaceState {
    SimulationWindow window;
    std::vector<double> samples;  // unit discrete L2 norm (dx-weighted)
    double energy = 0.0;
    double mu_R = 0.0;
    double peak_x = 0.0;
};

SurfaceState surface_state(const EvanescentSolution& chi, double alpha,
                           const SimulationWindow& window);

// V1 eigenfunction at E mapped onto the wall Hamiltonian:
//   g = psi + (1/E) (u1 / I) (u1 psi' - psi (u1' + mu u1)),
// an H3 eigenfunction at the same E; tends to psi on the left and to
// h(x) e^(ikx) on the right.
struct MappedState {
    SimulationWindow window;
    std::vector<std::complex<double>> g;
    double energy = 0.0;
    double k = 0.0;

    std::complex<double> eval(double x) const;

    BlochState psi;
    EvanescentSolution chi;
    ScaledCumulative cumulative;
};

MappedState mapped_state(const BlochState& psi, const EvanescentSolution& chi, double alpha,
                         double E, const SimulationWindow& window);

// Right-asymptote envelope h (a-periodic):
//   h = u + [(ik - mu) u1^2 u + u1^2 u' - u u1 u1'] / (E s).
struct TransmittedEnvelope {
    ComplexTrigSeries h;  // period a
    double energy = 0.0;
    double k = 0.0;
    std::complex<double> eval(double x) const { return h(x); }
};

TransmittedEnvelope transmitted_envelope(const BlochState& psi, const EvanescentSolution& chi,
                                         double E, int n_samples = 256);

}  // namespace isowall
