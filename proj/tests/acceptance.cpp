// Acceptance gate: one line per criterion, exit code = number of failures.
// Each criterion is self-contained and wrapped so an exception counts as a
// failure rather than aborting the gate.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "isowall/cumulative.hpp"
#include "isowall/fd.hpp"
#include "isowall/floquet.hpp"
#include "isowall/potential.hpp"
#include "isowall/quadrature.hpp"
#include "isowall/susy.hpp"
#include "isowall/tdse.hpp"

using namespace isowall;

namespace {

PeriodicPotential set1() { return make_mathieu(0.2, 2.0 * M_PI, -0.0818); }
PeriodicPotential set2() { return make_mathieu(0.2, 2.0 * M_PI, 0.1503); }

int g_failures = 0;

void run_criterion(int id, const char* name, const std::function<std::string(bool&)>& body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
        detail = body(ok);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++g_failures;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s %-24s %s [%.1fs]\n", id, ok ? "PASS" : "FAIL", name,
                detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// shared across criteria 3, 6, 7, 8: the calibrated gauge reproducing
// alpha0 = 117.45
struct Calibrated {
    EvanescentSolution chi;
    double scale = 0.0;
    double alpha0 = 0.0;
};

Calibrated calibrated_chi() {
    EvanescentSolution raw = gap_solution(set1());
    double a0 = alpha_min(raw);
    double c = std::sqrt(117.45 / a0);
    Calibrated cal{raw.scaled(c), c, 0.0};
    cal.alpha0 = alpha_min(cal.chi);
    return cal;
}

double sup_abs_diff(const std::function<double(double)>& f, const std::function<double(double)>& g,
                    double lo, double hi, int n) {
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        worst = std::max(worst, std::abs(f(x) - g(x)));
    }
    return worst;
}

}  // namespace

int main() {
    std::printf("isowall acceptance gate\n");

    run_criterion(1, "floquet-exponent-set1", [](bool& ok) {
        EvanescentSolution chi = gap_solution(set1());
        ok = std::abs(chi.mu_R - 0.2572) <= 1e-3 && chi.mu_I == 0.0;
        return fmt("mu_R=%.6f (target 0.2572+-1e-3), mu_I=%g", chi.mu_R, chi.mu_I);
    });

    run_criterion(2, "floquet-exponent-set2", [](bool& ok) {
        EvanescentSolution chi = gap_solution(set2());
        bool mu_ok = std::abs(chi.mu_R - 0.0334) <= 1e-3;
        bool mi_ok = std::abs(chi.mu_I - 0.5) <= 1e-9;
        ok = mu_ok && mi_ok;
        return fmt("mu_R=%.6f (target 0.0334+-1e-3: %s), mu_I=%.12f (target 0.5+-1e-9: %s)",
                   chi.mu_R, mu_ok ? "ok" : "out", chi.mu_I, mi_ok ? "ok" : "out");
    });

    run_criterion(3, "alpha-threshold", [](bool& ok) {
        EvanescentSolution chi = gap_solution(set1());
        double a0 = alpha_min(chi);
        ok = std::isfinite(a0) && a0 > 0.0;
        double worst_scaling = 0.0;
        for (double c : {0.5, 2.0, 10.0}) {
            double rel = std::abs(alpha_min(chi.scaled(c)) / (c * c * a0) - 1.0);
            worst_scaling = std::max(worst_scaling, rel);
        }
        ok = ok && worst_scaling <= 1e-9;
        Calibrated cal = calibrated_chi();
        ok = ok && std::abs(cal.alpha0 / 117.45 - 1.0) <= 0.05;
        return fmt("alpha0(unit-max)=%.9f, scaling err=%.1e, calibrated alpha0=%.4f at scale "
                   "c=%.9f (c^2=%.9f)",
                   a0, worst_scaling, cal.alpha0, cal.scale, cal.scale * cal.scale);
    });

    run_criterion(4, "isospectrality", [](bool& ok) {
        PeriodicPotential P = set1();
        EvanescentSolution chi = gap_solution(P);
        PeriodicPotential asym = asymptotic_lattice(P, chi);
        BandStructure b1 = band_structure(P, 3, 17);
        BandStructure b3 = band_structure(asym, 3, 17);
        double worst = 0.0;
        for (int i = 0; i < 6; ++i)
            worst = std::max(worst, std::abs(b1.band_edges[i] - b3.band_edges[i]));
        double disc = monodromy(asym, 0.0).discriminant;
        ok = worst <= 1e-6 && std::abs(disc) > 2.0;
        return fmt("max edge diff=%.3e (tol 1e-6), |Delta(0)| on V1+F0 = %.6f (> 2)", worst,
                   std::abs(disc));
    });

    run_criterion(5, "gauge-invariance", [](bool& ok) {
        PeriodicPotential P = set1();
        EvanescentSolution chi = gap_solution(P);
        const double a = P.period();
        Wall ref(P, chi, 2.0);
        double worst = 0.0;
        for (double c : {0.5, 2.0, 10.0}) {
            Wall scaled(P, chi.scaled(c), c * c * 2.0);
            worst = std::max(worst, sup_abs_diff([&](double x) { return ref.V3(x); },
                                                 [&](double x) { return scaled.V3(x); }, -20.0 * a,
                                                 20.0 * a, 2000));
        }
        ok = worst <= 1e-9;
        return fmt("max |V3 difference| over c in {0.5,2,10} = %.3e (tol 1e-9)", worst);
    });

    run_criterion(6, "transparency", [](bool& ok) {
        PeriodicPotential P = set1();
        Calibrated cal = calibrated_chi();
        SimulationWindow win(-2048.0, 2048.0, 32768);
        const double a = P.period();

        WavePacketState packet = gaussian_packet(win, -100.0, 40.0, 0.25);
        const double dt = 0.02, T = 380.0;
        const int stride = 1 << 24;  // endpoints only

        Trajectory base = evolve(packet, uniform_interface(P, win), dt, T, stride);
        if (base.guard_tripped) {
            ok = false;
            return std::string("baseline run tripped the wraparound guard");
        }
        BlochState carrier = bloch_state(P, 0, 0.25);
        ClearanceCheck cc{carrier.group_velocity, -100.0};

        double reflected[2] = {0.0, 0.0}, raw[2] = {0.0, 0.0};
        int idx = 0;
        for (double alpha : {150.0, 170.0}) {
            InterfacePotential wall = wall_potential(P, cal.chi, alpha, win);
            Trajectory run = evolve(packet, wall, dt, T, stride);
            if (run.guard_tripped) {
                ok = false;
                return fmt("alpha=%g wall run tripped the wraparound guard", alpha);
            }
            ScatteringReport rep =
                scattering_report(run, wall.wall_center, 10.0 * a, nullptr, &base, &cc);
            reflected[idx] = rep.reflected_norm;
            raw[idx] = rep.raw_reflected_norm;
            ++idx;
        }

        PeriodicPotential asym = asymptotic_lattice(P, gap_solution(P));
        StepReflection ctrl = step_reflection(P, asym, carrier.energy);
        double worst_excess = std::max(reflected[0], reflected[1]);
        double ratio = ctrl.R / std::max(worst_excess, 1e-4);
        ok = reflected[0] <= 1e-3 && reflected[1] <= 1e-3 && ratio >= 10.0;
        return fmt("reflected(150)=%.3e, reflected(170)=%.3e (tol 1e-3; raw %.3e/%.3e), step "
                   "control R=%.4f -> ratio %.0fx (>= 10x)",
                   reflected[0], reflected[1], raw[0], raw[1], ctrl.R, ratio);
    });

    run_criterion(7, "surface-state", [](bool& ok) {
        PeriodicPotential P = set1();
        Calibrated cal = calibrated_chi();
        const double alpha = 150.0;
        const double a = P.period();

        // (a) sup-norm eigen-residual of the normalized surface state
        SimulationWindow wres(-128.0, 128.0, 2048);
        SurfaceState gs = surface_state(cal.chi, alpha, wres);
        Wall wall(P, cal.chi, alpha);
        double raw_norm = 0.0;
        for (std::size_t i = 0; i < wres.n_points; ++i) {
            double v = wall.surface_amplitude(wres.x(i));
            raw_norm += v * v;
        }
        raw_norm = std::sqrt(raw_norm * wres.dx());
        auto g = [&](double x) { return wall.surface_amplitude(x) / raw_norm; };
        double res_sup = 0.0;
        for (double x = gs.peak_x - 8.0 * a; x <= gs.peak_x + 8.0 * a; x += 0.11) {
            double r = -fd_second_derivative(g, x, a / 700.0) + wall.V3(x) * g(x);
            res_sup = std::max(res_sup, std::abs(r));
        }
        bool res_ok = res_sup <= 1e-6;

        // (b) evolving g_s leaves |psi| invariant over t = 100
        InterfacePotential wallV = wall_potential(P, cal.chi, alpha, wres);
        WavePacketState psi0;
        psi0.window = wres;
        psi0.t = 0.0;
        psi0.amplitudes.assign(gs.samples.begin(), gs.samples.end());
        const double dt_b = 0.25 * wres.dx() * wres.dx();
        Trajectory still = evolve(psi0, wallV, dt_b, 100.0, 512);
        double drift = 0.0;
        for (const auto& snap : still.snapshots)
            for (std::size_t i = 0; i < snap.amplitudes.size(); ++i)
                drift = std::max(drift, std::abs(std::abs(snap.amplitudes[i]) - gs.samples[i]));
        bool drift_ok = !still.guard_tripped && drift <= 1e-6;

        // (c) dropped packet: bound_norm settles to a constant. The transient
        // radiation has weak fast tails (about 1e-6 amplitude near E ~ 17), so
        // the window must outrun them: +-1024 keeps the front out past t = 120.
        SimulationWindow wdrop(-1024.0, 1024.0, 16384);
        InterfacePotential wallD = wall_potential(P, cal.chi, alpha, wdrop);
        SurfaceState gsD = surface_state(cal.chi, alpha, wdrop);
        WavePacketState drop = gaussian_packet(wdrop, 0.0, 10.0, 0.0);
        Trajectory fall = evolve(drop, wallD, 0.01, 100.0, 100);
        double lo = 1e300, hi = 0.0;
        for (const auto& snap : fall.snapshots) {
            if (snap.t < 50.0) continue;
            std::complex<double> ov = 0.0;
            for (std::size_t i = 0; i < snap.amplitudes.size(); ++i)
                ov += gsD.samples[i] * snap.amplitudes[i];
            double b = std::norm(ov) * wdrop.dx() * wdrop.dx();
            lo = std::min(lo, b);
            hi = std::max(hi, b);
        }
        bool bound_ok = !fall.guard_tripped && (hi - lo) <= 1e-3;

        ok = res_ok && drift_ok && bound_ok;
        return fmt("residual sup=%.2e (tol 1e-6), |psi| drift=%.2e over t=100 (tol 1e-6), "
                   "bound_norm spread=%.2e for t in [50,100] (tol 1e-3, level %.4f)",
                   res_sup, drift, hi - lo, 0.5 * (hi + lo));
    });

    run_criterion(8, "mapped-eigenfunctions", [](bool& ok) {
        PeriodicPotential P = set1();
        Calibrated cal = calibrated_chi();
        const double alpha = 150.0;
        const double a = P.period();
        Wall wall(P, cal.chi, alpha);
        SimulationWindow win(-256.0, 256.0, 4096);

        struct Pair {
            int band;
            double frac;
        };
        const Pair pairs[] = {{0, 0.2}, {0, 0.45}, {1, 0.3}, {1, 0.7}, {2, 0.35}};
        double worst_res = 0.0, worst_env = 0.0;
        for (const Pair& pr : pairs) {
            double k = pr.frac * M_PI / a;
            BlochState b = bloch_state(P, pr.band, k);
            MappedState m = mapped_state(b, cal.chi, alpha, b.energy, win);
            auto g = [&](double x) { return m.eval(x); };
            double scale = 0.0;
            for (double x = -3.0 * a; x <= 3.0 * a; x += 0.23)
                scale = std::max(scale, std::abs(g(x)));
            for (double x = -2.0 * a; x <= 2.0 * a; x += 0.31) {
                std::complex<double> r =
                    -fd_second_derivative(g, x, a / 900.0) + (wall.V3(x) - b.energy) * g(x);
                worst_res = std::max(worst_res, std::abs(r) / scale);
            }
            // right asymptote: the envelope g e^(-ikx) must be a-periodic
            TransmittedEnvelope h = transmitted_envelope(b, cal.chi, b.energy);
            for (double x = 30.0 * a; x <= 31.0 * a; x += 0.17) {
                std::complex<double> env = m.eval(x) * std::polar(1.0, -k * x);
                std::complex<double> env_a = m.eval(x + a) * std::polar(1.0, -k * (x + a));
                worst_env = std::max(worst_env, std::abs(env_a - env) / scale);
                worst_env = std::max(worst_env, std::abs(env - h.eval(x)) / scale);
            }
        }
        ok = worst_res <= 1e-6 && worst_env <= 1e-6;
        return fmt("max residual=%.2e, max envelope aperiodicity=%.2e over 5 (band,k) samples "
                   "(tol 1e-6, relative to sup|g|)",
                   worst_res, worst_env);
    });

    run_criterion(9, "tdse-engine", [](bool& ok) {
        SimulationWindow win(-32.0, 32.0, 512);
        InterfacePotential V = uniform_interface(set1(), win);
        WavePacketState p = gaussian_packet(win, 0.0, 5.0, 0.5);

        SplitStepper ss(V, 1e-3);
        std::vector<std::complex<double>> amp = p.amplitudes;
        for (int s = 0; s < 100000; ++s) ss.advance(amp);
        double norm = 0.0;
        for (const auto& z : amp) norm += std::norm(z);
        double norm_drift = std::abs(std::sqrt(norm * win.dx()) - 1.0);
        bool norm_ok = norm_drift <= 1e-9;

        auto l2 = [&](const WavePacketState& x, const WavePacketState& y) {
            double acc = 0.0;
            for (std::size_t i = 0; i < x.amplitudes.size(); ++i)
                acc += std::norm(x.amplitudes[i] - y.amplitudes[i]);
            return std::sqrt(acc * win.dx());
        };
        WavePacketState f1 = evolve(p, V, 0.04, 2.0, 1 << 24).final_state();
        WavePacketState f2 = evolve(p, V, 0.02, 2.0, 1 << 24).final_state();
        WavePacketState f3 = evolve(p, V, 0.01, 2.0, 1 << 24).final_state();
        double ratio = l2(f1, f2) / l2(f2, f3);
        bool order_ok = ratio >= 3.5 && ratio <= 4.5;

        SimulationWindow wfree(-64.0, 64.0, 1024);
        const double x0 = -10.0, w = 8.0, k0 = 1.0, T = 4.0;
        WavePacketState pf = gaussian_packet(wfree, x0, w, k0);
        InterfacePotential Vf = uniform_interface(make_mathieu(0.0, 2.0 * M_PI, 0.0), wfree);
        WavePacketState ff = evolve(pf, Vf, 0.05, T, 1 << 24).final_state();
        const double N = std::pow(M_PI * w * w / 2.0, -0.25);
        const std::complex<double> denom(w * w, 4.0 * T);
        const std::complex<double> pref =
            N / std::sqrt(std::complex<double>(1.0, 4.0 * T / (w * w)));
        double disp = 0.0;
        for (std::size_t i = 0; i < wfree.n_points; ++i) {
            double x = wfree.x(i);
            double dxc = x - x0 - 2.0 * k0 * T;
            std::complex<double> exact =
                pref * std::exp(-dxc * dxc / denom) * std::polar(1.0, k0 * x - k0 * k0 * T);
            disp = std::max(disp, std::abs(ff.amplitudes[i] - exact));
        }
        bool disp_ok = disp <= 1e-6;

        ok = norm_ok && order_ok && disp_ok;
        return fmt("norm drift=%.2e over 1e5 steps (tol 1e-9), dt-convergence ratio=%.2f "
                   "(target 4), free dispersion sup err=%.2e (tol 1e-6)",
                   norm_drift, ratio, disp);
    });

    run_criterion(10, "constant-background", [](bool& ok) {
        PeriodicPotential flat = make_mathieu(0.0, 2.0 * M_PI, -1.0);
        EvanescentSolution chi = gap_solution(flat);
        double worst = 0.0;
        for (double alpha : {1.0, 2.0}) {
            Wall wall(flat, chi, alpha);
            const double delta = 0.5 * std::log(2.0 * (alpha - 0.5));
            worst = std::max(
                worst, sup_abs_diff([&](double x) { return wall.V3(x); },
                                    [&](double x) {
                                        double s = 1.0 / std::cosh(x - delta);
                                        return 1.0 - 2.0 * s * s;
                                    },
                                    -10.0, 10.0, 2000));
        }
        bool wall_ok = worst <= 1e-8;

        SimulationWindow win(-256.0, 256.0, 4096);
        InterfacePotential wallV = wall_potential(flat, chi, 1.0, win);
        WavePacketState p = gaussian_packet(win, -40.0, 10.0, 1.5);
        Trajectory run = evolve(p, wallV, 0.02, 60.0, 1 << 24);
        ScatteringReport rep = scattering_report(run, wallV.wall_center, 10.0 * 2.0 * M_PI);
        bool refl_ok = !run.guard_tripped && rep.raw_reflected_norm <= 1e-6;

        ok = wall_ok && refl_ok;
        return fmt("max |V3 - sech form|=%.2e (tol 1e-8), TDSE reflected=%.2e (tol 1e-6)", worst,
                   rep.raw_reflected_norm);
    });

    std::printf("%d of 10 criteria failed\n", g_failures);
    return g_failures;
}
