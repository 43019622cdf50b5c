#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lcpoly/error.hpp"
#include "lcpoly/measure.hpp"

namespace lcpoly {
namespace {

// A half-panel of an accepted Simpson bisection; the quadratic through its
// three nodes integrates to `mass` exactly.
struct Leaf {
    double a, h;
    double fa, fm, fb;
    double mass;
};

class LeafBuilder {
public:
    LeafBuilder(const Function1D& f, double max_log) : f_(f), max_log_(max_log) {}

    double eval(double t) {
        const double v = std::exp(f_(t) - max_log_);
        return std::isfinite(v) ? v : 0.0;
    }

    void refine(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double h = b - a;
        const double left = h / 12.0 * (fa + 4.0 * flm + fm);
        const double right = h / 12.0 * (fm + 4.0 * frm + fb);
        if (depth >= 48 || std::fabs(left + right - whole) <= 15.0 * tol) {
            leaves.push_back({a, m - a, fa, flm, fm, left});
            leaves.push_back({m, b - m, fm, frm, fb, right});
            return;
        }
        refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
        refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }

    std::vector<Leaf> leaves;

private:
    const Function1D& f_;
    double max_log_;
};

// Solves ∫_0^s q = target on [0, h] for the quadratic through the leaf nodes.
double invert_leaf(const Leaf& leaf, double target) {
    const double h = leaf.h;
    const double c = 2.0 * (leaf.fb - 2.0 * leaf.fm + leaf.fa) / (h * h);
    const double b = (4.0 * leaf.fm - 3.0 * leaf.fa - leaf.fb) / h;
    auto cdf = [&](double s) { return s * (leaf.fa + s * (0.5 * b + s * c / 3.0)); };
    auto pdf = [&](double s) { return leaf.fa + s * (b + s * c); };
    double lo = 0.0;
    double hi = h;
    double s = h * (target / leaf.mass);
    for (int it = 0; it < 100; ++it) {
        const double g = cdf(s) - target;
        if (g > 0.0) {
            hi = s;
        } else {
            lo = s;
        }
        const double d = pdf(s);
        double next = d > 0.0 ? s - g / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::fabs(next - s) <= 1e-15 * h || hi - lo <= 1e-15 * h) {
            s = next;
            break;
        }
        s = next;
    }
    return leaf.a + s;
}

}  // namespace

double sample_line_logconcave(const Function1D& log_density, double lo, double hi, RandomStream& rng) {
    if (lo == hi) {
        return lo;
    }
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("sample_line_logconcave: bracket must be finite with lo ≤ hi");
    }
    const Maximum mode = golden_section_max(log_density, lo, hi, 1e-10);
    if (!std::isfinite(mode.value)) {
        throw NumericalError("sample_line_logconcave: bracket carries zero mass");
    }
    LeafBuilder builder(log_density, mode.value);

    // Split at the mode so every piece is monotone, then into equal panels.
    std::vector<double> cuts;
    constexpr int kPanelsPerSide = 4;
    auto add_side = [&](double a, double b) {
        if (!(b > a)) {
            return;
        }
        for (int k = 0; k < kPanelsPerSide; ++k) {
            cuts.push_back(a + (b - a) * k / kPanelsPerSide);
        }
    };
    add_side(lo, mode.argmax);
    add_side(mode.argmax, hi);
    cuts.push_back(hi);

    std::vector<double> fvals(cuts.size());
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        fvals[i] = builder.eval(cuts[i]);
    }
    std::vector<double> mids(cuts.size() - 1);
    std::vector<double> coarse(cuts.size() - 1);
    double coarse_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        mids[i] = builder.eval(0.5 * (cuts[i] + cuts[i + 1]));
        coarse[i] = (cuts[i + 1] - cuts[i]) / 6.0 * (fvals[i] + 4.0 * mids[i] + fvals[i + 1]);
        coarse_total += coarse[i];
    }
    // The mode value is exp(0) = 1, so a degenerate coarse estimate still has a scale.
    const double scale = std::max(coarse_total, 1e-300);
    const double tol = 1e-10 * scale / static_cast<double>(coarse.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        builder.refine(cuts[i], cuts[i + 1], fvals[i], mids[i], fvals[i + 1], coarse[i], tol, 0);
    }

    double total = 0.0;
    for (const Leaf& leaf : builder.leaves) {
        total += leaf.mass;
    }
    if (!(total > 0.0)) {
        // All mass sits in a sub-resolution spike at the mode.
        return mode.argmax;
    }
    const double target = rng.uniform() * total;
    double cumulative = 0.0;
    for (const Leaf& leaf : builder.leaves) {
        if (leaf.mass > 0.0 && target < cumulative + leaf.mass) {
            return invert_leaf(leaf, target - cumulative);
        }
        cumulative += leaf.mass;
    }
    // Rounding pushed the target past the last leaf.
    const Leaf* last = nullptr;
    for (const Leaf& leaf : builder.leaves) {
        if (leaf.mass > 0.0) {
            last = &leaf;
        }
    }
    return last->a + last->h;
}

}  // namespace lcpoly
