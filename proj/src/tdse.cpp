#include "isowall/tdse.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isowall {
namespace {

constexpr double kEdgeGuard = 1e-6;
constexpr std::size_t kEdgePoints = 16;

double edge_amplitude(const std::vector<std::complex<double>>& amp) {
    const std::size_t n = amp.size();
    const std::size_t m = std::min(kEdgePoints, n / 2);
    double peak = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        peak = std::max({peak, std::abs(amp[i]), std::abs(amp[n - 1 - i])});
    return peak;
}

}  // namespace

double WavePacketState::norm() const {
    double acc = 0.0;
    for (const auto& a : amplitudes) acc += std::norm(a);
    return std::sqrt(acc * window.dx());
}

double WavePacketState::centroid() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
        acc += window.x(i) * std::norm(amplitudes[i]);
    return acc * window.dx();
}

WavePacketState gaussian_packet(const SimulationWindow& window, double x0, double w, double k0) {
    if (!(x0 > window.x_min && x0 < window.x_max))
        throw std::invalid_argument("gaussian_packet: x0 outside the window");
    if (!(w > 4.0 * window.dx()))
        throw std::invalid_argument("gaussian_packet: width must exceed 4 dx");
    WavePacketState st;
    st.window = window;
    st.t = 0.0;
    st.amplitudes.resize(window.n_points);
    for (std::size_t i = 0; i < window.n_points; ++i) {
        const double x = window.x(i);
        const double g = (x - x0) / w;
        st.amplitudes[i] = std::polar(std::exp(-g * g), k0 * x);
    }
    const double n = st.norm();
    for (auto& a : st.amplitudes) a /= n;
    if (edge_amplitude(st.amplitudes) > 1e-12)
        throw std::invalid_argument("gaussian_packet: packet touches the window edge");
    return st;
}

SplitStepper::SplitStepper(const InterfacePotential& V, double dt)
    : n_(V.window.n_points), dt_(dt) {
    if (dt <= 0.0) throw std::invalid_argument("SplitStepper: dt must be positive");
    if (V.samples.size() != n_) throw std::invalid_argument("SplitStepper: potential/window mismatch");
    half_v_phase_.resize(n_);
    kinetic_phase_.resize(n_);
    work_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) half_v_phase_[i] = std::polar(1.0, -0.5 * V.samples[i] * dt);
    const double dk = 2.0 * M_PI / V.window.length();
    for (std::size_t i = 0; i < n_; ++i) {
        const double j = i <= n_ / 2 ? static_cast<double>(i)
                                     : static_cast<double>(i) - static_cast<double>(n_);
        const double k = dk * j;
        kinetic_phase_[i] = std::polar(1.0 / static_cast<double>(n_), -k * k * dt);
    }
    plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n_), reinterpret_cast<fftw_complex*>(work_.data()),
                                 reinterpret_cast<fftw_complex*>(work_.data()), FFTW_FORWARD,
                                 FFTW_ESTIMATE);
    plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(n_), reinterpret_cast<fftw_complex*>(work_.data()),
                                 reinterpret_cast<fftw_complex*>(work_.data()), FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
}

SplitStepper::~SplitStepper() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void SplitStepper::advance(std::vector<std::complex<double>>& amplitudes) const {
    if (amplitudes.size() != n_) throw std::invalid_argument("SplitStepper: state size mismatch");
    for (std::size_t i = 0; i < n_; ++i) work_[i] = amplitudes[i] * half_v_phase_[i];
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                     reinterpret_cast<fftw_complex*>(work_.data()),
                     reinterpret_cast<fftw_complex*>(work_.data()));
    for (std::size_t i = 0; i < n_; ++i) work_[i] *= kinetic_phase_[i];
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_),
                     reinterpret_cast<fftw_complex*>(work_.data()),
                     reinterpret_cast<fftw_complex*>(work_.data()));
    for (std::size_t i = 0; i < n_; ++i) amplitudes[i] = work_[i] * half_v_phase_[i];
}

WavePacketState step(const WavePacketState& state, const InterfacePotential& V, double dt) {
    if (!(state.window == V.window)) throw std::invalid_argument("step: window mismatch");
    SplitStepper ss(V, dt);
    WavePacketState out = state;
    ss.advance(out.amplitudes);
    out.t += dt;
    return out;
}

Trajectory evolve(const WavePacketState& initial, const InterfacePotential& V, double dt,
                  double t_final, int snapshot_stride) {
    if (!(t_final > 0.0)) throw std::invalid_argument("evolve: t_final must be positive");
    if (snapshot_stride < 1) throw std::invalid_argument("evolve: snapshot_stride must be >= 1");
    if (!(initial.window == V.window)) throw std::invalid_argument("evolve: window mismatch");

    const long steps = std::max(1L, std::lround(std::ceil(t_final / dt - 1e-9)));
    const double dt_eff = t_final / static_cast<double>(steps);
    SplitStepper ss(V, dt_eff);

    Trajectory traj;
    traj.dt_effective = dt_eff;
    traj.snapshots.push_back(initial);

    WavePacketState cur = initial;
    for (long s = 1; s <= steps; ++s) {
        ss.advance(cur.amplitudes);
        cur.t = initial.t + dt_eff * static_cast<double>(s);
        const double edge = edge_amplitude(cur.amplitudes);
        if (edge > kEdgeGuard) {
            traj.snapshots.push_back(cur);
            traj.guard_tripped = true;
            traj.diagnostic = "wraparound guard tripped at t=" + std::to_string(cur.t) +
                              " (edge amplitude " + std::to_string(edge) +
                              "): enlarge window or shorten t_final";
            return traj;
        }
        if (s % snapshot_stride == 0 || s == steps) traj.snapshots.push_back(cur);
    }
    return traj;
}

double energy_expectation(const WavePacketState& state, const InterfacePotential& V) {
    if (!(state.window == V.window))
        throw std::invalid_argument("energy_expectation: window mismatch");
    const std::size_t n = state.amplitudes.size();
    std::vector<std::complex<double>> spec(state.amplitudes);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n),
                                      reinterpret_cast<fftw_complex*>(spec.data()),
                                      reinterpret_cast<fftw_complex*>(spec.data()), FFTW_FORWARD,
                                      FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    const double dk = 2.0 * M_PI / state.window.length();
    const double dx = state.window.dx();
    double kin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double j = i <= n / 2 ? static_cast<double>(i)
                                    : static_cast<double>(i) - static_cast<double>(n);
        const double k = dk * j;
        kin += k * k * std::norm(spec[i]);
    }
    kin *= dx / static_cast<double>(n);
    double pot = 0.0;
    for (std::size_t i = 0; i < n; ++i) pot += V.samples[i] * std::norm(state.amplitudes[i]);
    pot *= dx;
    return kin + pot;
}

namespace {

struct RegionNorms {
    double reflected = 0.0, transmitted = 0.0, center = 0.0, edge = 0.0, bound = 0.0;
};

RegionNorms region_norms(const WavePacketState& st, double interface_x, double buffer,
                         const SurfaceState* gs) {
    const std::size_t n = st.amplitudes.size();
    const double dx = st.window.dx();

    std::complex<double> overlap = 0.0;
    if (gs) {
        if (!(gs->window == st.window))
            throw std::invalid_argument("scattering_report: surface state window mismatch");
        for (std::size_t i = 0; i < n; ++i) overlap += gs->samples[i] * st.amplitudes[i];
        overlap *= dx;
    }

    RegionNorms r;
    r.bound = std::norm(overlap);
    const std::size_t m = std::min(kEdgePoints, n / 2);
    for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> a = st.amplitudes[i];
        if (gs) a -= overlap * gs->samples[i];
        const double w = std::norm(a) * dx;
        const double x = st.window.x(i);
        if (i < m || i >= n - m) r.edge += w;
        else if (x < interface_x - buffer) r.reflected += w;
        else if (x > interface_x + buffer) r.transmitted += w;
        else r.center += w;
    }
    return r;
}

}  // namespace

ScatteringReport scattering_report(const Trajectory& run, double interface_x, double buffer,
                                   const SurfaceState* gs, const Trajectory* baseline,
                                   const ClearanceCheck* clearance) {
    if (run.snapshots.empty()) throw std::invalid_argument("scattering_report: empty trajectory");
    const WavePacketState& fin = run.final_state();
    const double T = fin.t - run.snapshots.front().t;
    if (clearance) {
        const double need = std::abs(clearance->launch_x0 - interface_x) + buffer;
        if (std::abs(clearance->group_velocity) * T < need)
            throw std::runtime_error(
                "scattering_report: measurement-time precondition unmet (|v_g| T = " +
                std::to_string(std::abs(clearance->group_velocity) * T) + " < " +
                std::to_string(need) + ")");
    }

    const RegionNorms r = region_norms(fin, interface_x, buffer, gs);
    ScatteringReport rep;
    rep.raw_reflected_norm = r.reflected;
    rep.raw_transmitted_norm = r.transmitted;
    rep.bound_norm = r.bound;
    rep.center_residual = r.center;
    rep.edge_leakage = r.edge;
    rep.measurement_time = fin.t;
    rep.interface_x = interface_x;
    rep.buffer = buffer;
    rep.reflected_norm = r.reflected;
    rep.transmitted_norm = r.transmitted;
    if (baseline) {
        const RegionNorms b =
            region_norms(baseline->final_state(), interface_x, buffer, nullptr);
        rep.reflected_norm = std::max(0.0, r.reflected - b.reflected);
        rep.baseline_referenced = true;
    }
    return rep;
}

}  // namespace isowall
