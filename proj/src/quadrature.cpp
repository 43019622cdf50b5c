#include "lcpoly/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "lcpoly/error.hpp"

namespace lcpoly {
namespace {

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

struct SimpsonPanel {
    double a, m, b;
    double fa, fm, fb;
    double whole;
    double refined;  // S(left) + S(right)
    double lm, flm, rm, frm;
    double error;
    bool operator<(const SimpsonPanel& other) const { return error < other.error; }
};

SimpsonPanel make_simpson_panel(const Function1D& f, double a, double b, double fa, double fm,
                                double fb, std::size_t& evals) {
    SimpsonPanel p{};
    p.a = a;
    p.b = b;
    p.m = 0.5 * (a + b);
    p.fa = fa;
    p.fm = fm;
    p.fb = fb;
    p.lm = 0.5 * (a + p.m);
    p.rm = 0.5 * (p.m + b);
    p.flm = finite_or_zero(f(p.lm));
    p.frm = finite_or_zero(f(p.rm));
    evals += 2;
    const double h = b - a;
    p.whole = h / 6.0 * (fa + 4.0 * fm + fb);
    p.refined = h / 12.0 * (fa + 4.0 * p.flm + 2.0 * fm + 4.0 * p.frm + fb);
    p.error = std::fabs(p.refined - p.whole);
    return p;
}

// Kronrod 15-point nodes/weights and the embedded Gauss 7-point weights.
constexpr std::array<double, 8> kXgk = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkPanel {
    double a, b, value, error;
    bool operator<(const GkPanel& other) const { return error < other.error; }
};

GkPanel gk15(const Function1D& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = finite_or_zero(f(center));
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double s = finite_or_zero(f(center - dx)) + finite_or_zero(f(center + dx));
        kronrod += kWgk[j] * s;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * s;
        }
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_simpson(const Function1D& f, double a, double b, double abs_tol,
                                   std::size_t max_panels) {
    QuadratureResult out;
    if (a == b) {
        return out;
    }
    if (!(a < b)) {
        throw std::invalid_argument("integrate_simpson: require a < b");
    }
    std::priority_queue<SimpsonPanel> heap;
    const double fa = finite_or_zero(f(a));
    const double fb = finite_or_zero(f(b));
    const double fm = finite_or_zero(f(0.5 * (a + b)));
    out.evaluations = 3;
    heap.push(make_simpson_panel(f, a, b, fa, fm, fb, out.evaluations));
    double total_error = heap.top().error;
    while (total_error > abs_tol) {
        if (heap.size() >= max_panels) {
            out.converged = false;
            break;
        }
        SimpsonPanel p = heap.top();
        heap.pop();
        total_error -= p.error;
        SimpsonPanel left = make_simpson_panel(f, p.a, p.m, p.fa, p.flm, p.fm, out.evaluations);
        SimpsonPanel right = make_simpson_panel(f, p.m, p.b, p.fm, p.frm, p.fb, out.evaluations);
        total_error += left.error + right.error;
        heap.push(left);
        heap.push(right);
        if (!(right.m > p.m) || !(left.m < p.m)) {
            // Panels below floating resolution.
            out.converged = false;
            break;
        }
    }
    double value = 0.0;
    double error = 0.0;
    while (!heap.empty()) {
        const SimpsonPanel& p = heap.top();
        value += p.refined + (p.refined - p.whole) / 15.0;
        error += p.error;
        heap.pop();
    }
    out.value = value;
    out.error = error;
    return out;
}

QuadratureResult integrate_gk15(const Function1D& f, double a, double b, double abs_tol,
                                double rel_tol, std::size_t initial_panels, std::size_t max_panels) {
    QuadratureResult out;
    if (a == b) {
        return out;
    }
    if (!(a < b)) {
        throw std::invalid_argument("integrate_gk15: require a < b");
    }
    initial_panels = std::max<std::size_t>(initial_panels, 1);
    std::priority_queue<GkPanel> heap;
    double value = 0.0;
    double error = 0.0;
    const double width = (b - a) / static_cast<double>(initial_panels);
    for (std::size_t i = 0; i < initial_panels; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = i + 1 == initial_panels ? b : lo + width;
        GkPanel p = gk15(f, lo, hi);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    out.evaluations = 15 * initial_panels;
    while (error > std::max(abs_tol, rel_tol * std::fabs(value))) {
        if (heap.size() >= max_panels) {
            out.converged = false;
            break;
        }
        const GkPanel p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            heap.push(p);
            out.converged = false;
            break;
        }
        const GkPanel left = gk15(f, p.a, mid);
        const GkPanel right = gk15(f, mid, p.b);
        out.evaluations += 30;
        value += left.value + right.value - p.value;
        error += left.error + right.error - p.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed the drift of incremental updates.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = value;
    out.error = error;
    return out;
}

Maximum golden_section_max(const Function1D& f, double a, double b, double x_tol, int max_iter) {
    if (a > b) {
        std::swap(a, b);
    }
    const double fa = f(a);
    const double fb = f(b);
    if (a == b) {
        return {a, fa};
    }
    constexpr double kInvPhi = 0.6180339887498948482;
    double lo = a;
    double hi = b;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < max_iter && (hi - lo) > x_tol * (1.0 + std::fabs(lo) + std::fabs(hi)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        }
    }
    Maximum best{x1, f1};
    if (f2 > best.value) {
        best = {x2, f2};
    }
    if (fa > best.value) {
        best = {a, fa};
    }
    if (fb > best.value) {
        best = {b, fb};
    }
    return best;
}

double integrate_box(const std::function<double(std::span<const double>)>& f,
                     std::span<const double> lower, std::span<const double> upper, double abs_tol) {
    const std::size_t dim = lower.size();
    if (upper.size() != dim || dim == 0 || dim > 4) {
        throw std::invalid_argument("integrate_box: dimension must be 1..4 with matching bounds");
    }
    std::vector<double> point(dim);
    // Inner tolerances shrink so outer error estimates are not swamped by inner noise.
    std::function<double(std::size_t, double)> level = [&](std::size_t axis, double tol) -> double {
        const double budget = tol / (upper[axis] - lower[axis] + 1e-300);
        auto integrand = [&, axis](double t) {
            point[axis] = t;
            if (axis + 1 == dim) {
                return f(point);
            }
            return level(axis + 1, budget * 0.1);
        };
        const auto r = integrate_gk15(integrand, lower[axis], upper[axis], tol, 0.0, 4, 4000);
        if (!r.converged && r.error > 100.0 * tol) {
            throw NumericalError("integrate_box: quadrature did not converge");
        }
        return r.value;
    };
    return level(0, abs_tol);
}

double integrate_ball(const std::function<double(std::span<const double>)>& f, std::size_t dim,
                      double radius, double abs_tol) {
    if (dim == 0 || dim > 4 || !(radius > 0.0)) {
        throw std::invalid_argument("integrate_ball: dimension must be 1..4 and radius positive");
    }
    std::vector<double> point(dim);
    std::function<double(std::size_t, double, double)> level = [&](std::size_t axis, double used,
                                                                   double tol) -> double {
        const double r = std::sqrt(std::max(0.0, radius * radius - used));
        if (r == 0.0) {
            return 0.0;
        }
        const double budget = tol / (2.0 * r);
        auto integrand = [&, axis, used](double t) {
            point[axis] = t;
            if (axis + 1 == dim) {
                return f(point);
            }
            return level(axis + 1, used + t * t, budget * 0.1);
        };
        const auto res = integrate_gk15(integrand, -r, r, tol, 0.0, 4, 4000);
        if (!res.converged && res.error > 100.0 * tol) {
            throw NumericalError("integrate_ball: quadrature did not converge");
        }
        return res.value;
    };
    return level(0, 0.0, abs_tol);
}

}  // namespace lcpoly
