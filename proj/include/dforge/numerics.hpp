#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace dforge {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(double x) { return std::isfinite(x); }

/// Open interval (lo, hi) with extended-real endpoints, 0 <= lo < hi <= inf.
struct Interval {
    double lo = 0.0;
    double hi = kInf;

    bool contains(double x) const { return x > lo && x < hi; }
    bool contains_closure(double x) const { return x >= lo && x <= hi; }
    bool bounded() const { return is_finite(lo) && is_finite(hi); }
};

/// Adaptive Gauss-Kronrod integral of f over the finite interval [a, b].
/// Throws QuadratureError if the error estimate stays above tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-11, int max_depth = 18);

/// Composite fixed-order Gauss-Legendre panels; deterministic work, no error control.
double integrate_panels(const std::function<double(double)>& f, double a, double b,
                        int panels);

/// Improper integral of f over (endpoint, c] or [c, endpoint) by geometric shells,
/// with convergence certified by geometric tail decay. Throws InconclusiveNumeric
/// if neither convergence nor divergence can be certified, and returns +inf on
/// certified divergence only if allow_divergent, else throws.
double integrate_to_endpoint(const std::function<double(double)>& f, double c,
                             double endpoint, double tol = 1e-10, int max_shells = 64);

/// Verdict of the shell test for an improper integral.
enum class TailVerdict { Convergent, Divergent, Inconclusive };

struct TailResult {
    TailVerdict verdict = TailVerdict::Inconclusive;
    double value = kInf; ///< finite value when convergent
    int shells_used = 0;
};

/// Dyadic-shell analysis of a nonnegative improper integral toward `endpoint`
/// (finite or +inf), anchored at c. `shell_integral(x_far, x_near)` must return
/// the integral over the shell between the two abscissae (x_far closer to the
/// endpoint). Convergence: the last few shell values decay geometrically with
/// ratio < 0.9 and the geometric tail bound drops below tail_tol. Divergence:
/// the last 8 shell values are non-decreasing and the partial sum exceeds 1e12.
TailResult shell_test(const std::function<double(double, double)>& shell_integral,
                      double c, double endpoint,
                      double tail_tol = 1e-9, int max_shells = 64);

/// Monotone bisection solve of g(x) = y for strictly increasing g on (lo, hi).
/// Relative tolerance per |y|; throws NonConvergence after max_iter.
double bisect_increasing(const std::function<double(double)>& g, double y,
                         double lo, double hi, double rel_tol = 1e-12,
                         int max_iter = 200);

/// Deterministic pairwise sum (order-independent of accumulation chunking).
double pairwise_sum(const std::vector<double>& xs);

/// Surface area of the unit sphere S^{d-1} in R^d.
double sphere_area(int d);

} // namespace dforge
