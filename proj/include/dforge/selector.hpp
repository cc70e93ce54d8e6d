#pragma once

#include "dforge/errors.hpp"
#include "dforge/numerics.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace dforge {

/// One removed open interval of the construction.
struct GapInterval {
    double lo = 0.0;
    double hi = 0.0;
    int generation = 0;
};

/// Geometry of the symmetric middle-interval removal on a window (a, b):
/// generation n removes 2^{n-1} middle gaps of unit-window length 2*ratio/4^n,
/// so the total removed Lebesgue measure is ratio*(b-a) and the leftover set K
/// is a closed nowhere dense set of measure (1-ratio)*(b-a).
///
/// All members below work in unit-window coordinates unless noted.
class FatCantorGeometry {
public:
    FatCantorGeometry(double a, double b, double ratio);

    double a() const { return a_; }
    double b() const { return b_; }
    double width() const { return b_ - a_; }
    double ratio() const { return ratio_; }

    double piece_len(int n) const;      // depth-n piece length
    double gap_len(int n) const;        // generation-n gap length
    double remainder(int n) const;      // K-measure inside a depth-n piece
    double m2(int n) const;             // second central moment of the K distribution in a depth-n piece

    double to_real(double u) const { return a_ + u * (b_ - a_); }
    double to_unit(double x) const { return (x - a_) / (b_ - a_); }

    /// Left endpoints (unit) of the 2^depth pieces at table depth, sorted.
    int table_depth() const { return table_depth_; }
    const std::vector<double>& piece_lefts() const;

    /// Apply fn to every gap with generation <= max_generation (real coordinates).
    void for_each_gap(int max_generation, const std::function<void(const GapInterval&)>& fn) const;

    /// x belongs to the leftover set K, resolved to piece length ~1e-16.
    bool in_complement(double x) const;

private:
    double a_, b_, ratio_;
    int table_depth_ = 14;
    mutable std::vector<double> piece_lefts_; // built on first use
    std::vector<double> m2_;                  // m2(0..m2_depth)
};

/// Prefix integrals of a weight over the leftover set K:
///     prefix(x) = integral of w over K cap (a, min(x,b)].
/// Built from a depth-D table of per-piece values
///     remainder(D) * [ w(mid) + 0.5 * w2(mid) * m2(D) ]
/// (the second term uses the symmetric second moment of K inside a piece;
/// pass w2 = nullptr to drop it), completed by an exact descent below table
/// depth for the partial piece containing x.
class CantorWeightPrefix {
public:
    CantorWeightPrefix(std::shared_ptr<const FatCantorGeometry> geom,
                       std::function<double(double)> w,
                       std::function<double(double)> w2);

    double prefix(double x) const;
    double total() const { return prefix_.back(); }

private:
    double piece_value(int n, double lo_unit) const;
    double partial_piece(int n, double lo_unit, double xu) const;

    std::shared_ptr<const FatCantorGeometry> geom_;
    std::function<double(double)> w_, w2_;
    std::vector<double> prefix_; // size 2^D + 1
};

/// The measurable set F with dp~/dp = 1_F. F is the union of an enumerable
/// family of disjoint open intervals inside a window (a, b), together with the
/// exterior of the window, so that thinning a scale keeps it strictly
/// increasing on the whole interval. The Full kind selects everything.
class SubspaceSelector {
public:
    enum class Kind { Full, Svc, Intervals };

    /// F = the whole interval; thinning is the identity.
    static SubspaceSelector full(Interval ambient);

    /// Fat-Cantor removal on (a, b); F = removed gaps + window exterior.
    static SubspaceSelector svc(double a, double b, double ratio);

    /// Explicit finite family of disjoint open subintervals of (a, b).
    static SubspaceSelector intervals(double a, double b,
                                      std::vector<std::pair<double, double>> family);

    Kind kind() const { return kind_; }
    bool is_full() const { return kind_ == Kind::Full; }

    double window_lo() const { return a_; }
    double window_hi() const { return b_; }
    double ratio() const { return ratio_; }
    const Interval& ambient() const { return ambient_; }

    /// Lebesgue measure of F within the window (Full: ambient length, may be inf).
    double f_lebesgue() const;
    /// Lebesgue measure of the removed-set complement K within the window.
    double complement_lebesgue() const;
    /// Upper bound on the Lebesgue measure of gaps with generation > n.
    double tail_bound_lebesgue(int n) const;

    void for_each_gap(int max_generation, const std::function<void(const GapInterval&)>& fn) const;
    bool in_complement(double x) const;

    const std::vector<std::pair<double, double>>& family() const { return family_; }
    std::shared_ptr<const FatCantorGeometry> geometry() const { return geom_; }

private:
    SubspaceSelector() = default;
    Kind kind_ = Kind::Full;
    Interval ambient_{0.0, kInf};
    double a_ = 0.0, b_ = 0.0, ratio_ = 0.0;
    std::vector<std::pair<double, double>> family_; // Intervals kind
    std::shared_ptr<const FatCantorGeometry> geom_; // Svc kind
};

/// Measure report for a selector.
struct SelectorReport {
    double lebesgue_measure_f = 0.0;          // may be +inf (full selector on an unbounded interval)
    double lebesgue_measure_complement = 0.0; // always finite
    bool proper = false;                      // complement has positive measure
};

SelectorReport selector_report(const SubspaceSelector& sel);

} // namespace dforge
