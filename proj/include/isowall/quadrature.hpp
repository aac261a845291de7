#pragma once

#include <functional>

namespace isowall {

// Composite Gauss-Legendre quadrature: `cells` equal subintervals of [a,b],
// a 16-point rule on each. Exact for polynomials up to degree 31 per cell;
// for the smooth periodic integrands used here, 8-16 cells per period reach
// quadrature error below 1e-12.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int cells);

}  // namespace isowall
