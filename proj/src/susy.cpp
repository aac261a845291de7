#include "isowall/susy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace isowall {
namespace {

constexpr int kPeriodSamples = 512;

// Node detection over one u1 period: any sign change between scan points is
// a node, and a sampled |u1| below the scan resolution is treated as one too.
bool u1_has_node(const EvanescentSolution& chi) {
    const double span = 2.0 * chi.period;
    const int n = 4096;
    double prev = chi.u1(0.0);
    const double tiny = 1e-6 * span / n;
    for (int i = 1; i <= n; ++i) {
        const double v = chi.u1(span * i / n);
        if (std::abs(v) < tiny || v * prev < 0.0) return true;
        prev = v;
    }
    return false;
}

}  // namespace

Superpotential superpotential(const EvanescentSolution& chi) {
    const double a = chi.period;
    if (u1_has_node(chi))
        throw std::domain_error("superpotential singular: use wall_potential directly");
    std::vector<double> w(kPeriodSamples);
    for (int i = 0; i < kPeriodSamples; ++i) {
        const double x = a * i / kPeriodSamples;
        w[i] = chi.mu_R + chi.du1(x) / chi.u1(x);
    }
    Superpotential sp;
    sp.w = TrigSeries(w, a);
    sp.mu_R = chi.mu_R;
    return sp;
}

PeriodicPotential partner_potential(const PeriodicPotential& P, const EvanescentSolution& chi) {
    const Superpotential sp = superpotential(chi);  // throws on nodes
    const double a = P.period();
    std::vector<double> v2(kPeriodSamples);
    for (int i = 0; i < kPeriodSamples; ++i) {
        const double x = a * i / kPeriodSamples;
        const double w = sp.eval(x);
        // V2 = W^2 - W' with W' = V1 - W^2 (Riccati), so no differencing.
        v2[i] = 2.0 * w * w - P.eval(x);
    }
    return make_sampled(v2, a);
}

double alpha_min(const EvanescentSolution& chi) {
    if (chi.mu_R <= 0.0) throw std::domain_error("alpha_min: mu_R must be positive");
    const ScaledCumulative cum(chi.u1, chi.mu_R, 0.0, chi.period);
    return cum.s0();
}

Wall::Wall(const PeriodicPotential& base, const EvanescentSolution& chi, double alpha)
    : base_(base),
      chi_(chi),
      param_(alpha, alpha_min(chi)),
      cum_(chi.u1, chi.mu_R, alpha, chi.period) {}

double Wall::F(double x) const {
    const double u = chi_.u1(x);
    const double du = chi_.du1(x);
    const double I = cum_.I(x);
    const double u2 = u * u;
    // I -> +inf far left; both terms then collapse to exact zeros.
    return 2.0 * u2 * u2 / (I * I) - 4.0 * u * (du + chi_.mu_R * u) / I;
}

double Wall::surface_amplitude(double x) const {
    const double u = chi_.u1(x);
    const double grow = std::exp(chi_.mu_R * x);
    const double denom = cum_.s(x) * grow + (param_.alpha - cum_.s0()) / grow;
    return u / denom;
}

double Wall::center() const {
    return 0.5 * std::log((param_.alpha - cum_.s0()) / cum_.mean_s()) / chi_.mu_R;
}

InterfacePotential wall_potential(const PeriodicPotential& P, const EvanescentSolution& chi,
                                  double alpha, const SimulationWindow& window) {
    const double a0 = alpha_min(chi);
    if (!(alpha > a0))
        throw std::domain_error(
            "singular wall: F diverges where alpha + int chi^2 = 0 (alpha must exceed " +
            std::to_string(a0) + ")");
    if (window.dx() > P.period() / 32.0)
        throw std::invalid_argument("wall_potential: window too coarse (need >= 32 points per period)");
    Wall wall(P, chi, alpha);
    InterfacePotential ip{window, {}, P, asymptotic_lattice(P, chi), wall.center()};
    ip.samples.resize(window.n_points);
    for (std::size_t i = 0; i < window.n_points; ++i) ip.samples[i] = wall.V3(window.x(i));
    return ip;
}

PeriodicPotential asymptotic_lattice(const PeriodicPotential& P, const EvanescentSolution& chi) {
    if (chi.mu_R <= 0.0) throw std::domain_error("asymptotic_lattice: mu_R must be positive");
    const double a = P.period();
    const ScaledCumulative cum(chi.u1, chi.mu_R, 0.0, a);
    std::vector<double> v(kPeriodSamples);
    for (int i = 0; i < kPeriodSamples; ++i) {
        const double x = a * i / kPeriodSamples;
        const double u = chi.u1(x);
        const double du = chi.du1(x);
        const double s = cum.s(x);
        const double u2 = u * u;
        const double F0 = 2.0 * u2 * u2 / (s * s) - 4.0 * u * (du + chi.mu_R * u) / s;
        v[i] = P.eval(x) + F0;
    }
    return make_sampled(v, a);
}

SurfaceState surface_state(const EvanescentSolution& chi, double alpha,
                           const SimulationWindow& window) {
    const double a0 = alpha_min(chi);
    if (!(alpha > a0))
        throw std::domain_error("surface_state: alpha must exceed alpha0 = " + std::to_string(a0));
    const ScaledCumulative cum(chi.u1, chi.mu_R, alpha, chi.period);
    const double beta = alpha - cum.s0();

    SurfaceState st;
    st.window = window;
    st.mu_R = chi.mu_R;
    st.samples.resize(window.n_points);
    double norm2 = 0.0;
    std::size_t ipeak = 0;
    for (std::size_t i = 0; i < window.n_points; ++i) {
        const double x = window.x(i);
        const double grow = std::exp(chi.mu_R * x);
        const double v = chi.u1(x) / (cum.s(x) * grow + beta / grow);
        st.samples[i] = v;
        norm2 += v * v;
        if (std::abs(v) > std::abs(st.samples[ipeak])) ipeak = i;
    }
    norm2 *= window.dx();
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : st.samples) v *= inv;
    st.peak_x = window.x(ipeak);
    return st;
}

std::complex<double> MappedState::eval(double x) const {
    const std::complex<double> p = psi.psi(x);
    const std::complex<double> dp = psi.dpsi(x);
    const double u = chi.u1(x);
    const double du = chi.du1(x);
    const double I = cumulative.I(x);
    return p + (u / (energy * I)) * (u * dp - p * (du + chi.mu_R * u));
}

MappedState mapped_state(const BlochState& psi, const EvanescentSolution& chi, double alpha,
                         double E, const SimulationWindow& window) {
    if (E == 0.0) throw std::invalid_argument("mapped_state: E must be nonzero");
    if (std::abs(E - psi.energy) > 1e-8 * std::max(1.0, std::abs(psi.energy)))
        throw std::invalid_argument("mapped_state: E disagrees with the Bloch state's energy");
    const double a0 = alpha_min(chi);
    if (!(alpha > a0))
        throw std::domain_error("mapped_state: alpha must exceed alpha0 = " + std::to_string(a0));

    MappedState ms;
    ms.window = window;
    ms.energy = E;
    ms.k = psi.k;
    ms.psi = psi;
    ms.chi = chi;
    ms.cumulative = ScaledCumulative(chi.u1, chi.mu_R, alpha, chi.period);
    ms.g.resize(window.n_points);
    for (std::size_t i = 0; i < window.n_points; ++i) ms.g[i] = ms.eval(window.x(i));
    return ms;
}

TransmittedEnvelope transmitted_envelope(const BlochState& psi, const EvanescentSolution& chi,
                                         double E, int n_samples) {
    if (E == 0.0) throw std::invalid_argument("transmitted_envelope: E must be nonzero");
    const double a = psi.period;
    const ScaledCumulative cum(chi.u1, chi.mu_R, 0.0, a);
    const std::complex<double> ik_mu(-chi.mu_R, psi.k);
    std::vector<std::complex<double>> h(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) {
        const double x = a * i / n_samples;
        const std::complex<double> u = psi.u_at(x);
        const std::complex<double> du = psi.du_at(x);
        const double u1 = chi.u1(x);
        const double du1 = chi.du1(x);
        h[i] = u + (ik_mu * u1 * u1 * u + u1 * u1 * du - u * u1 * du1) / (E * cum.s(x));
    }
    TransmittedEnvelope env;
    env.h = ComplexTrigSeries(h, a);
    env.energy = E;
    env.k = psi.k;
    return env;
}

}  // namespace isowall
