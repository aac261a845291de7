#include "isowall/floquet.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isowall {
namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 4>;  // (psi_1, psi_1', psi_2, psi_2')

constexpr double kOdeTol = 1e-14;

auto make_stepper() {
    return ode::make_controlled(kOdeTol, kOdeTol, ode::runge_kutta_fehlberg78<State>());
}

// Integrates two independent solutions of -psi'' + (V - E) psi = 0 from x0 to
// x1 (psi'' = (V - E) psi as a first-order system).
void propagate(const PeriodicPotential& P, double E, double x0, double x1, State& y) {
    auto rhs = [&](const State& s, State& dsdx, double x) {
        const double q = P.eval(x) - E;
        dsdx[0] = s[1];
        dsdx[1] = q * s[0];
        dsdx[2] = s[3];
        dsdx[3] = q * s[2];
    };
    ode::integrate_adaptive(make_stepper(), rhs, y, x0, x1, (x1 - x0) * 1e-3);
}

int galerkin_modes(const PeriodicPotential& P) {
    // Enough plane waves that truncation sits far below the 1e-6 contracts;
    // sampled lattices carry broader spectra than the bare cosine.
    return P.analytic() ? 24 : 32;
}

struct GalerkinResult {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
    int M;
};

GalerkinResult galerkin_solve(const PeriodicPotential& P, double k, int M) {
    const double a = P.period();
    const double g0 = 2.0 * M_PI / a;
    const int dim = 2 * M + 1;
    const auto v = P.fourier_coefficients(2 * M);  // index j + 2M
    Eigen::MatrixXcd H(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double kg = k + g0 * (i - M);
        for (int j = 0; j < dim; ++j) {
            H(i, j) = v[(i - j) + 2 * M];
            if (i == j) H(i, j) += kg * kg;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("band_structure: eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors(), M};
}

}  // namespace

Monodromy monodromy(const PeriodicPotential& P, double E) {
    State y{1.0, 0.0, 0.0, 1.0};
    propagate(P, E, 0.0, P.period(), y);
    Monodromy r;
    r.energy = E;
    r.m = {{{y[0], y[2]}, {y[1], y[3]}}};
    r.discriminant = y[0] + y[3];
    return r;
}

std::complex<double> floquet_exponent(const PeriodicPotential& P, double E) {
    const double a = P.period();
    const double d = monodromy(P, E).discriminant;
    if (d > 2.0) return {std::acosh(0.5 * d) / a, 0.0};
    if (d < -2.0) return {std::acosh(-0.5 * d) / a, M_PI / a};
    return {0.0, std::acos(0.5 * d) / a};
}

EvanescentSolution gap_solution(const PeriodicPotential& P, Normalization tag) {
    const double a = P.period();
    const Monodromy mono = monodromy(P, 0.0);
    if (std::abs(mono.discriminant) <= 2.0)
        throw std::domain_error("gap_solution: not a gap energy: shift E0");

    // Eigenvector of the growing multiplier lambda = sgn(Delta) e^(mu_R a).
    Eigen::Matrix2d m;
    m << mono.m[0][0], mono.m[0][1], mono.m[1][0], mono.m[1][1];
    const Eigen::EigenSolver<Eigen::Matrix2d> es(m);
    const int grow = std::abs(es.eigenvalues()(0)) > std::abs(es.eigenvalues()(1)) ? 0 : 1;
    const double lambda = es.eigenvalues()(grow).real();
    const double mu_R = std::log(std::abs(lambda)) / a;
    const double mu_I = lambda > 0.0 ? 0.0 : M_PI / a;

    EvanescentSolution sol;
    sol.mu_R = mu_R;
    sol.mu_I = mu_I;
    sol.period = a;
    sol.tag = tag;

    // chi sampled over [0, 2a) (one full period of u1 in both classes),
    // derivative taken straight from the ODE state.
    const int n = 512;
    std::vector<double> u1(n), du1(n);
    State y{es.eigenvectors()(0, grow).real(), es.eigenvectors()(1, grow).real(), 0.0, 0.0};
    double x_prev = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi = 2.0 * a * i / n;
        if (xi > x_prev) propagate(P, 0.0, x_prev, xi, y);
        x_prev = xi;
        const double damp = std::exp(-mu_R * xi);
        u1[i] = y[0] * damp;
        du1[i] = (y[1] - mu_R * y[0]) * damp;
    }

    // drop_tol above the ODE-sample noise floor: second derivatives amplify a
    // spurious mode m by (m w0)^2, so noise modes must not survive the fit.
    TrigSeries u1_fit(u1, 2.0 * a, 1e-13);
    TrigSeries du1_fit(du1, 2.0 * a, 1e-13);

    // Normalization convention: the extremum of the interpolant (not of the
    // raw sample grid, which would make the scale grid-dependent) becomes +1.
    // Newton polish of u1'(x) = 0 from the extremal sample; also fixes the
    // +-u1 ambiguity of the eigenvector deterministically.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < u1.size(); ++i)
        if (std::abs(u1[i]) > std::abs(u1[imax])) imax = i;
    double xm = 2.0 * a * imax / n;
    for (int it = 0; it < 50; ++it) {
        const double d2 = u1_fit.second_derivative(xm);
        if (d2 == 0.0) break;
        const double step = u1_fit.derivative(xm) / d2;
        xm -= step;
        if (std::abs(step) < 1e-14 * a) break;
    }
    double scale = 1.0 / u1_fit(xm);
    if (tag == Normalization::UnitMeanSquare) {
        const double ms = u1_fit.mean_square();
        scale = std::copysign(1.0 / std::sqrt(ms), scale);
    }
    sol.u1 = u1_fit.scaled(scale);
    sol.du1 = du1_fit.scaled(scale);
    return sol;
}

BandStructure band_structure(const PeriodicPotential& P, int n_bands, int n_k) {
    if (n_bands < 1) throw std::invalid_argument("band_structure: n_bands must be >= 1");
    if (n_k < 2) throw std::invalid_argument("band_structure: n_k must be >= 2");
    const double a = P.period();
    const int M = std::max(galerkin_modes(P), n_bands + 8);

    BandStructure bs;
    bs.period = a;
    bs.k_grid.resize(n_k);
    bs.bands.assign(n_bands, std::vector<double>(n_k));
    for (int ik = 0; ik < n_k; ++ik) {
        const double k = -M_PI / a + 2.0 * M_PI / a * ik / (n_k - 1);
        bs.k_grid[ik] = k;
        const auto g = galerkin_solve(P, k, M);
        for (int n = 0; n < n_bands; ++n) bs.bands[n][ik] = g.energies(n);
    }
    // Band edges sit exactly at k = 0 and k = pi/a for a real periodic V.
    const auto g0 = galerkin_solve(P, 0.0, M);
    const auto gp = galerkin_solve(P, M_PI / a, M);
    for (int n = 0; n < n_bands; ++n) {
        bs.band_edges.push_back(std::min(g0.energies(n), gp.energies(n)));
        bs.band_edges.push_back(std::max(g0.energies(n), gp.energies(n)));
    }
    return bs;
}

std::vector<double> band_edges_from_discriminant(const PeriodicPotential& P, int n_edges,
                                                 double E_min, double E_max, int n_scan) {
    // Bisection on h(E) = Delta(E) -+ 2; bracketing scan locates each sign
    // change of |Delta| - 2. The scan step must undercut the narrowest open
    // gap in range, else that gap's edge pair goes unseen.
    std::vector<double> edges;
    auto f = [&](double E) { return std::abs(monodromy(P, E).discriminant) - 2.0; };
    double e_prev = E_min;
    double f_prev = f(e_prev);
    for (int i = 1; i <= n_scan && static_cast<int>(edges.size()) < n_edges; ++i) {
        const double e = E_min + (E_max - E_min) * i / n_scan;
        const double fe = f(e);
        if (f_prev == 0.0) edges.push_back(e_prev);
        else if (f_prev * fe < 0.0) {
            double lo = e_prev, hi = e, flo = f_prev;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (hi - lo < 1e-13 * std::max(1.0, std::abs(mid))) break;
                if (flo * fm <= 0.0) hi = mid;
                else {
                    lo = mid;
                    flo = fm;
                }
            }
            edges.push_back(0.5 * (lo + hi));
        }
        e_prev = e;
        f_prev = fe;
    }
    return edges;
}

std::complex<double> BlochState::u_at(double x) const {
    const int M = (static_cast<int>(coef.size()) - 1) / 2;
    const double g0 = 2.0 * M_PI / period;
    const std::complex<double> z = std::polar(1.0, g0 * x);
    std::complex<double> zm = std::polar(1.0, -g0 * x * M);
    std::complex<double> acc = 0.0;
    for (const auto& c : coef) {
        acc += c * zm;
        zm *= z;
    }
    return acc;
}

std::complex<double> BlochState::du_at(double x) const {
    const int M = (static_cast<int>(coef.size()) - 1) / 2;
    const double g0 = 2.0 * M_PI / period;
    const std::complex<double> z = std::polar(1.0, g0 * x);
    std::complex<double> zm = std::polar(1.0, -g0 * x * M);
    std::complex<double> acc = 0.0;
    for (int m = -M; m <= M; ++m) {
        acc += coef[m + M] * zm * std::complex<double>(0.0, g0 * m);
        zm *= z;
    }
    return acc;
}

BlochState bloch_state(const PeriodicPotential& P, int band_index, double k) {
    const double a = P.period();
    if (k < -M_PI / a - 1e-12 || k > M_PI / a + 1e-12)
        throw std::invalid_argument("bloch_state: k outside the Brillouin zone");
    if (band_index < 0) throw std::invalid_argument("bloch_state: band index must be >= 0");
    const int M = std::max(galerkin_modes(P), band_index + 8);
    const auto g = galerkin_solve(P, k, M);

    BlochState st;
    st.energy = g.energies(band_index);
    st.k = k;
    st.period = a;
    st.band = band_index;

    Eigen::VectorXcd c = g.vectors.col(band_index);
    // Deterministic global phase: the dominant coefficient is made real
    // positive. Also pins the time-reversal pairing u(-k) = conj(u(k)).
    int i_dom = 0;
    for (int i = 1; i < c.size(); ++i)
        if (std::abs(c(i)) > std::abs(c(i_dom))) i_dom = i;
    c *= std::polar(1.0, -std::arg(c(i_dom)));

    const double g0 = 2.0 * M_PI / a;
    double vg = 0.0;
    for (int i = 0; i < c.size(); ++i) vg += 2.0 * (k + g0 * (i - M)) * std::norm(c(i));
    st.group_velocity = vg;

    st.coef.assign(c.data(), c.data() + c.size());
    const int n = 256;
    st.u.resize(n);
    for (int i = 0; i < n; ++i) st.u[i] = st.u_at(a * i / n);
    return st;
}

namespace {

// (psi(0), psi'(0)) of the right-moving Bloch state at in-band E, plus its
// probability current j = Im(conj(psi) psi') > 0. The monodromy eigenvector
// for e^{ika} is (m01, lambda - m00) or (lambda - m11, m10); take the better
// conditioned of the two (they are proportional).
struct BlochBoundary {
    std::complex<double> psi, dpsi;
    double j;
};

BlochBoundary right_mover(const PeriodicPotential& P, double E) {
    const Monodromy m = monodromy(P, E);
    const double half = 0.5 * m.discriminant;
    if (std::abs(half) >= 1.0)
        throw std::domain_error("step_reflection: E lies in a spectral gap");
    const std::complex<double> lam{half, std::sqrt(1.0 - half * half)};
    std::complex<double> v0, v1;
    if (std::abs(m.m[0][1]) >= std::abs(m.m[1][0])) {
        v0 = m.m[0][1];
        v1 = lam - m.m[0][0];
    } else {
        v0 = lam - m.m[1][1];
        v1 = m.m[1][0];
    }
    double j = std::imag(std::conj(v0) * v1);
    if (j < 0.0) {
        v0 = std::conj(v0);
        v1 = std::conj(v1);
        j = -j;
    }
    if (j == 0.0) throw std::domain_error("step_reflection: zero-current state (band edge)");
    return {v0, v1, j};
}

}  // namespace

StepReflection step_reflection(const PeriodicPotential& left, const PeriodicPotential& right,
                               double E) {
    const BlochBoundary in = right_mover(left, E);
    const BlochBoundary tr = right_mover(right, E);
    const std::complex<double> refl_psi = std::conj(in.psi);
    const std::complex<double> refl_dpsi = std::conj(in.dpsi);

    // in + r*refl = t*tr for value and slope at x = 0.
    const std::complex<double> det = refl_psi * (-tr.dpsi) - (-tr.psi) * refl_dpsi;
    StepReflection out;
    out.energy = E;
    out.r = (-in.psi * (-tr.dpsi) - (-tr.psi) * (-in.dpsi)) / det;
    out.t = (refl_psi * (-in.dpsi) - (-in.psi) * refl_dpsi) / det;
    out.R = std::norm(out.r);
    out.T = std::norm(out.t) * tr.j / in.j;
    return out;
}

}  // namespace isowall
