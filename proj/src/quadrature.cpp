#include "shellspectra/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "shellspectra/errors.hpp"

namespace shellspectra {

namespace {

// Reference rule on [-1, 1], Newton iteration on P_n from the Chebyshev guess.
Rule1D reference_rule(int n) {
    Rule1D r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

const Rule1D& cached_reference(int n) {
    static std::mutex mu;
    static std::map<int, Rule1D> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, reference_rule(n)).first;
    return it->second;
}

}  // namespace

Rule1D gauss_legendre(int n, double a, double b) {
    if (n < 1) throw InvalidArgument("gauss_legendre: n must be positive");
    const Rule1D& ref = cached_reference(n);
    Rule1D r;
    r.x.resize(n);
    r.w.resize(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.x[i] = c + h * ref.x[i];
        r.w[i] = h * ref.w[i];
    }
    return r;
}

Rule1D periodic_trapezoid(int n, double a, double b, double shift) {
    if (n < 1) throw InvalidArgument("periodic_trapezoid: n must be positive");
    Rule1D r;
    r.x.resize(n);
    r.w.assign(n, (b - a) / n);
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) r.x[i] = a + (i + shift) * h;
    return r;
}

Rule1D composite_gauss_legendre(int n_per_panel, double a, double b, double max_panel) {
    Rule1D r;
    if (!(b > a)) return r;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel - 1e-12)));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const Rule1D g = gauss_legendre(n_per_panel, a + p * h, a + (p + 1) * h);
        r.x.insert(r.x.end(), g.x.begin(), g.x.end());
        r.w.insert(r.w.end(), g.w.begin(), g.w.end());
    }
    return r;
}

}  // namespace shellspectra
