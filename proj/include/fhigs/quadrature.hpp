#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace fhigs {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre polynomial.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
    std::vector<double> x(n), w(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - static_cast<double>(j) * p2) /
                     (static_cast<double>(j) + 1.0);
            }
            pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    return {x, w};
}

/// Composite Gauss-Legendre integral of f over [a, b] with the given number
/// of panels.
template <typename F>
double integrate_gl(F&& f, double a, double b, std::size_t panels = 1, std::size_t order = 32) {
    static thread_local std::vector<double> nodes, weights;
    static thread_local std::size_t cached_order = 0;
    if (cached_order != order) {
        auto [x, w] = gauss_legendre(order);
        nodes = std::move(x);
        weights = std::move(w);
        cached_order = order;
    }
    double acc = 0.0;
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += weights[i] * f(mid + 0.5 * h * nodes[i]);
    }
    return acc * 0.5 * h;
}

}  // namespace fhigs
