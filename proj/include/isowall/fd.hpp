#pragma once

namespace isowall {

// 9-point central second derivative, O(h^8). Used wherever an eigen-residual
// must be checked independently of the analytic derivative identities the
// construction itself relies on. Works for real and complex-valued f.
template <class F>
auto fd_second_derivative(F&& f, double x, double h) {
    const auto s1 = f(x + h) + f(x - h);
    const auto s2 = f(x + 2 * h) + f(x - 2 * h);
    const auto s3 = f(x + 3 * h) + f(x - 3 * h);
    const auto s4 = f(x + 4 * h) + f(x - 4 * h);
    return (s1 * (8.0 / 5.0) + s2 * (-1.0 / 5.0) + s3 * (8.0 / 315.0) + s4 * (-1.0 / 560.0) -
            f(x) * (205.0 / 72.0)) /
           (h * h);
}

}  // namespace isowall
