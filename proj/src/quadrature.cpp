#include "isowall/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace isowall {
namespace {

constexpr int kOrder = 16;

struct Rule {
    std::array<double, kOrder> node{};
    std::array<double, kOrder> weight{};
};

// Nodes are the roots of P_16 on [-1,1], found by Newton iteration from the
// Chebyshev initial guess; weights w = 2/((1-x^2) P'_16(x)^2).
Rule build_rule() {
    Rule r;
    const int n = kOrder;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = w;
        r.weight[n - 1 - i] = w;
    }
    return r;
}

const Rule& rule() {
    static const Rule r = build_rule();
    return r;
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int cells) {
    if (cells < 1) throw std::invalid_argument("gauss_legendre: cells must be >= 1");
    const Rule& r = rule();
    const double h = (b - a) / cells;
    double total = 0.0;
    for (int c = 0; c < cells; ++c) {
        const double mid = a + (c + 0.5) * h;
        double acc = 0.0;
        for (int i = 0; i < kOrder; ++i) acc += r.weight[i] * f(mid + 0.5 * h * r.node[i]);
        total += acc;
    }
    return total * 0.5 * h;
}

}  // namespace isowall
