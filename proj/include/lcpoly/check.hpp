#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcpoly/measure.hpp"
#include "lcpoly/polynomial.hpp"

namespace lcpoly {

/// One inequality-checker outcome. `rhs_core` omits the unknown absolute
/// constant; ratio = lhs / rhs_core when rhs_core > 0.
struct CheckReport {
    std::string name;
    double lhs = 0.0;
    double rhs_core = 0.0;
    double ratio = 0.0;
    double std_error = 0.0;
    nlohmann::json config = nlohmann::json::object();
    /// Set only for checks whose inequality is a theorem with no unknown constant.
    std::optional<bool> passed;
};

[[nodiscard]] nlohmann::json report_to_json(const CheckReport& r);

/// lhs / rhs with the conventions 0/0 = 0 and x/0 = +inf.
[[nodiscard]] double safe_ratio(double lhs, double rhs) noexcept;

/// Main bound on a given sample set, reusing `bootstrap` for the TV error
/// bar. Throws DegenerateInput("degenerate variance") when σ̂_g < 1e-12.
[[nodiscard]] CheckReport main_bound_on_samples(const SampleSet& s, const Polynomial& f, const Polynomial& g,
                                                std::size_t bins, RandomStream bootstrap,
                                                std::size_t resamples = 200);

/// Requires max(deg f, deg g) ≥ 2.
[[nodiscard]] CheckReport check_main_bound(const LogConcaveMeasure& m, const Polynomial& f,
                                           const Polynomial& g, std::size_t n, std::uint64_t seed,
                                           std::size_t bins = 0,
                                           std::optional<SamplingMethod> method = std::nullopt);

struct EnsembleCell {
    std::size_t index = 0;
    std::string measure;
    std::size_t dim = 0;
    std::string g;
    std::string h;
    double delta = 0.0;
    double tv = 0.0;
    double tv_stderr = 0.0;
    double lhs = 0.0;
    double rhs_core = 0.0;
    double ratio = 0.0;
    /// Max relative change of the ratio under (f, g) -> (λf + c, λg + c)
    /// and under translation alone, on the same samples.
    double invariance_defect = 0.0;
};

struct EnsembleSpec {
    std::vector<MeasureFamily> families{MeasureFamily::standard_gaussian, MeasureFamily::uniform_box,
                                        MeasureFamily::product_exponential};
    std::vector<std::size_t> dims{1, 2, 3, 4};
    unsigned degree = 2;
    double coefficient_scale = 1.0;
    /// Empty selects the 10-point log grid on [1e-3, 1e-1].
    std::vector<double> deltas;
    std::size_t cells = 200;
    std::size_t bins = 0;
    /// h ≡ 0, so f = g in every cell.
    bool trivial = false;
    /// Fixed pair used in every cell instead of random draws (dim taken from g).
    std::optional<Polynomial> fixed_g;
    std::optional<Polynomial> fixed_h;
    bool check_invariance = true;
    std::size_t threads = 0;
};

/// Ensemble measure of a family in dimension `dim`: N(0, I), uniform on
/// [-1, 1]^dim, product Laplace with unit rates, uniform unit ball.
[[nodiscard]] LogConcaveMeasure ensemble_measure(MeasureFamily family, std::size_t dim);

[[nodiscard]] std::vector<double> default_delta_grid();

struct ConstantEstimate {
    unsigned degree = 0;
    std::size_t trials = 0;
    std::vector<double> ratios;
    double c_hat = 0.0;
    /// trajectory[k] = max(ratios[0..k]).
    std::vector<double> trajectory;
    std::vector<EnsembleCell> cells;
    double max_invariance_defect = 0.0;
};

/// Each cell draws its measure, polynomials, δ and sample seed from its own
/// split stream, so cell k is independent of the number of cells and threads.
[[nodiscard]] ConstantEstimate estimate_constant(const EnsembleSpec& spec, std::size_t n, std::uint64_t seed);

/// trajectory.back() / trajectory[size/2 - 1]; 1 when the earlier value is 0.
[[nodiscard]] double trajectory_growth(std::span<const double> trajectory);

struct CarberyWrightResult {
    std::vector<CheckReport> per_t;
    std::vector<std::size_t> hits;
    /// Slope of log μ(|f| ≤ t) against log t over the fitted decade.
    double exponent = 0.0;
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    std::size_t fit_points = 0;
};

/// `t_grid` ascending and positive. The exponent is fitted over the smallest
/// decade [t*, 10 t*] whose lower end has ≥ 100 hits; with fewer hits
/// anywhere, over grid points with any hits. Throws DegenerateInput when no
/// sample falls below the largest t, std::invalid_argument for constant f.
[[nodiscard]] CarberyWrightResult check_carbery_wright(const LogConcaveMeasure& m, const Polynomial& f,
                                                       std::span<const double> t_grid, std::size_t n,
                                                       std::uint64_t seed,
                                                       std::optional<SamplingMethod> method = std::nullopt);
[[nodiscard]] CarberyWrightResult carbery_wright_on_samples(const SampleSet& s, const Polynomial& f,
                                                            std::span<const double> t_grid);

struct CarberyWrightCell {
    std::size_t index = 0;
    std::string measure;
    std::size_t dim = 0;
    std::string f;
    double exponent = 0.0;
    std::size_t fit_points = 0;
};

/// Random degree-d polynomials centred at their sample median, each swept
/// over t = mean|f| · 10^{-6..0} (37 points).
[[nodiscard]] std::vector<CarberyWrightCell> carbery_wright_ensemble(const EnsembleSpec& spec, std::size_t n,
                                                                     std::uint64_t seed);

struct MomentEquivalence {
    CheckReport versus_zero;  // ‖f‖_q / ‖f‖₀ against (qd)^d
    CheckReport versus_one;   // ‖f‖_q / ‖f‖₁ against q^d
    double norm0 = 0.0;
    double norm1 = 0.0;
    double norm2 = 0.0;
    double norm_q = 0.0;
    /// ‖f‖₀ ≤ ‖f‖₁ ≤ ‖f‖₂ up to 1e-12 relative.
    bool norm_chain_holds = true;
};

[[nodiscard]] MomentEquivalence check_moment_equivalence(const LogConcaveMeasure& m, const Polynomial& f,
                                                         double q, std::size_t n, std::uint64_t seed,
                                                         std::optional<SamplingMethod> method = std::nullopt);

/// 1-D only: (max ρ)² · Var by quadrature; passes iff ≥ 1/12 - 1e-9.
[[nodiscard]] CheckReport check_density_variance(const LogConcaveMeasure& m);

/// ‖∂_e f‖₂ / (‖D_e μ‖_TV · ‖f‖₂), norms by Monte Carlo. dim ≤ 4.
[[nodiscard]] CheckReport check_reverse_poincare(const LogConcaveMeasure& m, const Polynomial& f,
                                                 const Direction& e, std::size_t n, std::uint64_t seed,
                                                 std::optional<SamplingMethod> method = std::nullopt);

/// Var f / (mean |x - x̄|² · mean |∇f|²); 0 when ∇f vanishes on the sample.
[[nodiscard]] CheckReport check_poincare(const LogConcaveMeasure& m, const Polynomial& f, std::size_t n,
                                         std::uint64_t seed,
                                         std::optional<SamplingMethod> method = std::nullopt);

/// bound(ε) = A^{-1/(d-1)} ε^{1/(2d-2)} + ε^{-1/2} B. At the balancing point
/// ε* = (A^{1/(d-1)} B)^{(2d-2)/d} both terms equal A^{-1/d} B^{1/d}; the true
/// minimum is at most this and at least half of it.
struct EpsilonSplit {
    double epsilon_star = 0.0;
    double bound_at_star = 0.0;
    /// 2 A^{-1/d} B^{1/d}
    double closed_form = 0.0;
};

[[nodiscard]] double epsilon_split_bound(double a, double b, unsigned d, double epsilon);
/// A, B > 0 and d ≥ 2.
[[nodiscard]] EpsilonSplit epsilon_split(double a, double b, unsigned d);

}  // namespace lcpoly
