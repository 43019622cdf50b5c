#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace lcpoly {

using Function1D = std::function<double(double)>;

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Globally adaptive Simpson: repeatedly bisects the panel with the largest
/// |S(halves) - S(whole)| until the summed estimate is below `abs_tol`.
/// Non-finite integrand values are read as 0, which lets integrable endpoint
/// singularities converge under refinement.
[[nodiscard]] QuadratureResult integrate_simpson(const Function1D& f, double a, double b,
                                                 double abs_tol, std::size_t max_panels = 200000);

/// Globally adaptive Gauss-Kronrod 7/15 on [a, b], starting from `initial_panels`
/// equal panels. Stops when the error estimate is below max(abs_tol, rel_tol*|I|).
[[nodiscard]] QuadratureResult integrate_gk15(const Function1D& f, double a, double b,
                                              double abs_tol, double rel_tol = 0.0,
                                              std::size_t initial_panels = 8,
                                              std::size_t max_panels = 20000);

struct Maximum {
    double argmax = 0.0;
    double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal function on [a, b].
/// Endpoints are included in the comparison so monotone functions return a boundary.
[[nodiscard]] Maximum golden_section_max(const Function1D& f, double a, double b,
                                         double x_tol = 1e-12, int max_iter = 200);

/// Nested tensor-product integral over the box [lower, upper] (dim ≤ 4) with
/// adaptive GK15 on every axis. The innermost axis is the last one.
[[nodiscard]] double integrate_box(const std::function<double(std::span<const double>)>& f,
                                   std::span<const double> lower, std::span<const double> upper,
                                   double abs_tol);

/// Nested integral over the centred ball of radius `radius` in R^dim (dim ≤ 4),
/// using variable limits x_k ∈ [-r_k, r_k], r_k² = radius² - Σ_{j<k} x_j².
[[nodiscard]] double integrate_ball(const std::function<double(std::span<const double>)>& f,
                                    std::size_t dim, double radius, double abs_tol);

}  // namespace lcpoly
