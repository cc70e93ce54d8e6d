#include "dforge/selector.hpp"

#include <algorithm>
#include <cmath>

namespace dforge {

FatCantorGeometry::FatCantorGeometry(double a, double b, double ratio)
    : a_(a), b_(b), ratio_(ratio) {
    if (!(a < b)) throw ParamError("fat-Cantor window requires a < b");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ParamError("removal ratio must lie in (0,1)");
    // m2(n) = sum_{k>=n} ((piece_len(k) - piece_len(k+1))/2)^2, truncated at 4^-k underflow
    const int depth = 80;
    m2_.assign(depth + 1, 0.0);
    for (int n = depth - 1; n >= 0; --n) {
        const double c = 0.5 * (piece_len(n) - piece_len(n + 1));
        m2_[static_cast<std::size_t>(n)] = c * c + m2_[static_cast<std::size_t>(n) + 1];
    }
}

double FatCantorGeometry::piece_len(int n) const {
    return (1.0 - ratio_) * std::ldexp(1.0, -n) + ratio_ * std::ldexp(1.0, -2 * n);
}

double FatCantorGeometry::gap_len(int n) const {
    return 2.0 * ratio_ * std::ldexp(1.0, -2 * n);
}

double FatCantorGeometry::remainder(int n) const {
    return (1.0 - ratio_) * std::ldexp(1.0, -n);
}

double FatCantorGeometry::m2(int n) const {
    if (n >= static_cast<int>(m2_.size())) return 0.0;
    return m2_[static_cast<std::size_t>(n)];
}

const std::vector<double>& FatCantorGeometry::piece_lefts() const {
    if (piece_lefts_.empty()) {
        std::vector<double> lefts{0.0};
        for (int n = 1; n <= table_depth_; ++n) {
            const double off = piece_len(n) + gap_len(n);
            const std::size_t sz = lefts.size();
            lefts.reserve(2 * sz);
            for (std::size_t i = 0; i < sz; ++i) lefts.push_back(lefts[i] + off);
            std::sort(lefts.begin(), lefts.end());
        }
        piece_lefts_ = std::move(lefts);
    }
    return piece_lefts_;
}

void FatCantorGeometry::for_each_gap(int max_generation,
                                     const std::function<void(const GapInterval&)>& fn) const {
    std::vector<double> lefts{0.0};
    for (int n = 1; n <= max_generation; ++n) {
        const double ln = piece_len(n), gn = gap_len(n), off = ln + gn;
        for (double lo : lefts)
            fn(GapInterval{to_real(lo + ln), to_real(lo + ln + gn), n});
        const std::size_t sz = lefts.size();
        lefts.reserve(2 * sz);
        for (std::size_t i = 0; i < sz; ++i) lefts.push_back(lefts[i] + off);
        std::sort(lefts.begin(), lefts.end());
    }
}

bool FatCantorGeometry::in_complement(double x) const {
    if (x < a_ || x > b_) return false;
    double u = to_unit(x);
    double lo = 0.0;
    for (int n = 0; n < 80; ++n) {
        const double ln1 = piece_len(n + 1), gn1 = gap_len(n + 1);
        if (u > lo + ln1 && u < lo + ln1 + gn1) return false; // inside a gap
        if (u > lo + ln1) lo += ln1 + gn1;                    // right child
        if (piece_len(n + 1) < 1e-17) break;
    }
    return true;
}

CantorWeightPrefix::CantorWeightPrefix(std::shared_ptr<const FatCantorGeometry> geom,
                                       std::function<double(double)> w,
                                       std::function<double(double)> w2)
    : geom_(std::move(geom)), w_(std::move(w)), w2_(std::move(w2)) {
    const auto& lefts = geom_->piece_lefts();
    const int d = geom_->table_depth();
    prefix_.assign(lefts.size() + 1, 0.0);
    for (std::size_t i = 0; i < lefts.size(); ++i)
        prefix_[i + 1] = prefix_[i] + piece_value(d, lefts[i]);
}

double CantorWeightPrefix::piece_value(int n, double lo_unit) const {
    const double w = geom_->width();
    const double mid = geom_->to_real(lo_unit + 0.5 * geom_->piece_len(n));
    double v = w_(mid);
    if (w2_) v += 0.5 * w2_(mid) * geom_->m2(n) * w * w;
    return geom_->remainder(n) * w * v;
}

double CantorWeightPrefix::partial_piece(int n, double lo_unit, double xu) const {
    double acc = 0.0;
    for (int k = n; k < 80; ++k) {
        const double lk = geom_->piece_len(k);
        const double lk1 = geom_->piece_len(k + 1), gk1 = geom_->gap_len(k + 1);
        if (xu >= lo_unit + lk - 1e-18) {
            acc += piece_value(k, lo_unit);
            return acc;
        }
        if (xu <= lo_unit + lk1) continue;                 // descend left child
        acc += piece_value(k + 1, lo_unit);                // full left child
        if (xu <= lo_unit + lk1 + gk1) return acc;         // x inside the gap
        lo_unit += lk1 + gk1;                              // descend right child
    }
    return acc;
}

double CantorWeightPrefix::prefix(double x) const {
    if (x <= geom_->a()) return 0.0;
    if (x >= geom_->b()) return prefix_.back();
    const double xu = geom_->to_unit(x);
    const auto& lefts = geom_->piece_lefts();
    auto it = std::upper_bound(lefts.begin(), lefts.end(), xu);
    const std::size_t i = static_cast<std::size_t>(it - lefts.begin()) - 1;
    const double lo = lefts[i];
    if (xu >= lo + geom_->piece_len(geom_->table_depth()))
        return prefix_[i + 1]; // x in the gap right of piece i
    return prefix_[i] + partial_piece(geom_->table_depth(), lo, xu);
}

SubspaceSelector SubspaceSelector::full(Interval ambient) {
    SubspaceSelector s;
    s.kind_ = Kind::Full;
    s.ambient_ = ambient;
    return s;
}

SubspaceSelector SubspaceSelector::svc(double a, double b, double ratio) {
    SubspaceSelector s;
    s.kind_ = Kind::Svc;
    s.a_ = a;
    s.b_ = b;
    s.ratio_ = ratio;
    s.geom_ = std::make_shared<FatCantorGeometry>(a, b, ratio);
    return s;
}

SubspaceSelector SubspaceSelector::intervals(double a, double b,
                                             std::vector<std::pair<double, double>> family) {
    if (!(a < b)) throw ParamError("selector window requires a < b");
    std::sort(family.begin(), family.end());
    double prev = a;
    for (auto& [lo, hi] : family) {
        if (lo < prev || hi <= lo || hi > b)
            throw ParamError("selector intervals must be disjoint and inside the window");
        prev = hi;
    }
    SubspaceSelector s;
    s.kind_ = Kind::Intervals;
    s.a_ = a;
    s.b_ = b;
    s.family_ = std::move(family);
    return s;
}

double SubspaceSelector::f_lebesgue() const {
    switch (kind_) {
    case Kind::Full:
        return (is_finite(ambient_.hi) && is_finite(ambient_.lo)) ? ambient_.hi - ambient_.lo
                                                                  : kInf;
    case Kind::Svc:
        return ratio_ * (b_ - a_);
    case Kind::Intervals: {
        double s = 0.0;
        for (auto& [lo, hi] : family_) s += hi - lo;
        return s;
    }
    }
    return 0.0;
}

double SubspaceSelector::complement_lebesgue() const {
    switch (kind_) {
    case Kind::Full:
        return 0.0;
    case Kind::Svc:
        return (1.0 - ratio_) * (b_ - a_);
    case Kind::Intervals:
        return (b_ - a_) - f_lebesgue();
    }
    return 0.0;
}

double SubspaceSelector::tail_bound_lebesgue(int n) const {
    if (kind_ != Kind::Svc) return 0.0;
    return ratio_ * (b_ - a_) * std::ldexp(1.0, -n);
}

void SubspaceSelector::for_each_gap(int max_generation,
                                    const std::function<void(const GapInterval&)>& fn) const {
    switch (kind_) {
    case Kind::Full:
        return;
    case Kind::Svc:
        geom_->for_each_gap(max_generation, fn);
        return;
    case Kind::Intervals:
        for (auto& [lo, hi] : family_) fn(GapInterval{lo, hi, 1});
        return;
    }
}

bool SubspaceSelector::in_complement(double x) const {
    switch (kind_) {
    case Kind::Full:
        return false;
    case Kind::Svc:
        return geom_->in_complement(x);
    case Kind::Intervals: {
        if (x <= a_ || x >= b_) return false;
        for (auto& [lo, hi] : family_)
            if (x > lo && x < hi) return false;
        return true;
    }
    }
    return false;
}

SelectorReport selector_report(const SubspaceSelector& sel) {
    SelectorReport r;
    r.lebesgue_measure_f = sel.f_lebesgue();
    r.lebesgue_measure_complement = sel.complement_lebesgue();
    r.proper = r.lebesgue_measure_complement > 0.0;
    return r;
}

} // namespace dforge
