#pragma once

#include <array>
#include <complex>
#include <vector>

#include "isowall/fourier.hpp"
#include "isowall/potential.hpp"

namespace isowall {

// Propagator of (psi, psi') across one period at energy E. trace classifies
// the spectrum: |trace| > 2 in gaps, <= 2 in bands; det = 1 (Wronskian).
struct Monodromy {
    double energy = 0.0;
    std::array<std::array<double, 2>, 2> m{};  // m[row][col]
    double discriminant = 0.0;
    double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

Monodromy monodromy(const PeriodicPotential& P, double E);

// mu = mu_R + i mu_I with mu_R >= 0; mu_I = 0 (gap above/below even band
// count), pi/a (gap with sign-flipping solutions) or the Bloch phase rate
// inside a band (where mu_R = 0).
std::complex<double> floquet_exponent(const PeriodicPotential& P, double E);

enum class Normalization { UnitMax, UnitMeanSquare };

// E=0 gap solution chi(x) = u1(x) e^(mu_R x) in factored form. u1 is real and
// stored on period 2a so the antiperiodic class (mu_I = pi/a) needs no complex
// bookkeeping; u1^2, u1*u1' and u1^4 are then a-periodic in all regimes.
struct EvanescentSolution {
    double mu_R = 0.0;
    double mu_I = 0.0;  // 0 or pi/a
    double period = 0.0;
    TrigSeries u1;   // on [0, 2a)
    TrigSeries du1;  // derivative samples taken from the ODE state, own series
    Normalization tag = Normalization::UnitMax;

    bool antiperiodic() const { return mu_I != 0.0; }
    double chi(double x) const { return u1(x) * std::exp(mu_R * x); }
    double dchi(double x) const { return (du1(x) + mu_R * u1(x)) * std::exp(mu_R * x); }

    // Gauge copy (c*chi carries alpha -> c^2*alpha); used by the calibrated
    // normalization convention and the gauge-invariance checks.
    EvanescentSolution scaled(double c) const {
        EvanescentSolution s = *this;
        s.u1 = u1.scaled(c);
        s.du1 = du1.scaled(c);
        return s;
    }
};

// Throws std::domain_error when E=0 lies in a band of P.
EvanescentSolution gap_solution(const PeriodicPotential& P,
                                Normalization tag = Normalization::UnitMax);

struct BandStructure {
    std::vector<double> k_grid;               // in [-pi/a, pi/a]
    std::vector<std::vector<double>> bands;   // bands[n][ik]
    std::vector<double> band_edges;           // ascending: lo_1, hi_1, lo_2, hi_2, ...
    double period = 0.0;
};

BandStructure band_structure(const PeriodicPotential& P, int n_bands, int n_k);

// Independent edge solver: scans the discriminant for |Delta(E)| = 2 crossings
// (bracketing + bisection on the monodromy trace). Cross-validates the
// Galerkin eigensolver behind band_structure.
std::vector<double> band_edges_from_discriminant(const PeriodicPotential& P, int n_edges,
                                                 double E_min, double E_max, int n_scan = 4000);

// Bloch eigenfunction psi(x) = u(x) e^(ikx); u unit mean square over a period.
struct BlochState {
    double energy = 0.0;
    double k = 0.0;
    double period = 0.0;
    int band = 0;
    double group_velocity = 0.0;  // dE/dk (Hellmann-Feynman); sign = direction
    std::vector<std::complex<double>> coef;  // plane-wave coefficients, G_m = 2 pi (m - M)/a
    std::vector<std::complex<double>> u;     // samples on a uniform period grid

    std::complex<double> u_at(double x) const;
    std::complex<double> du_at(double x) const;
    std::complex<double> psi(double x) const { return u_at(x) * std::polar(1.0, k * x); }
    std::complex<double> dpsi(double x) const {
        return (du_at(x) + std::complex<double>(0.0, k) * u_at(x)) * std::polar(1.0, k * x);
    }
};

// Throws std::invalid_argument for k outside [-pi/a, pi/a].
BlochState bloch_state(const PeriodicPotential& P, int band_index, double k);

// Stationary scattering off the abrupt junction left|right at an energy lying
// inside a band of both lattices: an incident right-moving Bloch state of the
// left lattice matches r * (left-mover) + t * (right-mover of the right
// lattice) at x = 0. R = |r|^2 and T = |t|^2 j_R / j_L satisfy R + T = 1.
// Computable where the time-dependent run cannot be (the abrupt step radiates
// split-step artifacts above any edge guard long before slow bands clear).
struct StepReflection {
    double energy = 0.0;
    double R = 0.0;
    double T = 0.0;
    std::complex<double> r{};
    std::complex<double> t{};
};

// Throws std::domain_error when E falls in a gap of either lattice.
StepReflection step_reflection(const PeriodicPotential& left, const PeriodicPotential& right,
                               double E);

}  // namespace isowall
