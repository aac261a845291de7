#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace isowall {

// Uniform spatial grid for interface potentials and wave packets.
// Points are x_i = x_min + i*dx, i = 0..n_points-1; x_max itself is not a
// grid point (periodic convention, matches the FFT layout downstream).
struct SimulationWindow {
    double x_min = 0.0;
    double x_max = 0.0;
    std::size_t n_points = 0;

    SimulationWindow() = default;
    SimulationWindow(double xmin, double xmax, std::size_t n) : x_min(xmin), x_max(xmax), n_points(n) {
        if (!(x_min < 0.0 && 0.0 < x_max))
            throw std::invalid_argument("SimulationWindow: require x_min < 0 < x_max");
        if (n_points == 0 || (n_points & (n_points - 1)) != 0)
            throw std::invalid_argument("SimulationWindow: n_points must be a power of two");
    }

    double length() const { return x_max - x_min; }
    double dx() const { return length() / static_cast<double>(n_points); }
    double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }

    std::vector<double> grid() const {
        std::vector<double> g(n_points);
        for (std::size_t i = 0; i < n_points; ++i) g[i] = x(i);
        return g;
    }

    bool operator==(const SimulationWindow& o) const {
        return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
    }
};

}  // namespace isowall
