#include "dforge/walk.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace dforge {

NaturalScaleSpeed::NaturalScaleSpeed(const DiffusionSpec& spec) : spec_(spec) {
    spec.validate();
}

double NaturalScaleSpeed::to_state(double z) const { return spec_.scale->invert(z); }

double NaturalScaleSpeed::mass(double z1, double z2) const {
    if (z2 <= z1) return 0.0;
    return spec_.speed.mass(to_state(z1), to_state(z2));
}

double NaturalScaleSpeed::hold_time(double zl, double zc, double zr) const {
    // weight w(y) = 2 (zc^y - zl)(zr - zc|y) / (zr - zl), peak 2(zc-zl)(zr-zc)/(zr-zl)
    const double span = zr - zl;
    auto weight = [&](double y) {
        return 2.0 * (std::min(y, zc) - zl) * (zr - std::max(y, zc)) / span;
    };
    const ScaleFunction& p = *spec_.scale;
    if (spec_.speed.has_density()) {
        const double xl = to_state(zl), xc = to_state(zc), xr = to_state(zr);
        if (!is_finite(spec_.speed.mass(xc, xr)) || !is_finite(spec_.speed.mass(xl, xc)))
            return kInf;
        auto side = [&](double a, double b) {
            if (b <= a) return 0.0;
            return integrate_panels(
                [&](double x) { return weight(p.eval(x)) * spec_.speed.density(x); }, a, b, 8);
        };
        return side(xl, xc) + side(xc, xr);
    }
    // mass-only measure: Stieltjes midpoint sum on a z-subdivision
    const int n = 32;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = zl + span * i / n, b = zl + span * (i + 1) / n;
        acc += weight(0.5 * (a + b)) * mass(a, b);
    }
    return acc;
}

namespace {

struct NodeData {
    double x = 0.0;
    double dt = 0.0;
    double f = 0.0;
};

class Recorder {
public:
    Recorder(RadialPath& path, bool record, bool with_pcaf) : path_(path), record_(record),
                                                              with_pcaf_(with_pcaf) {}
    void push(double t, double x, double a) {
        if (record_) {
            path_.times.push_back(t);
            path_.states.push_back(x);
            if (with_pcaf_) path_.pcaf.push_back(a);
        }
        path_.final_time = t;
        path_.final_state = x;
        path_.final_pcaf = a;
    }

private:
    RadialPath& path_;
    bool record_, with_pcaf_;
};

} // namespace

RadialPath simulate_path(const DiffusionSpec& spec, double x0, const WalkConfig& cfg,
                         const std::function<double(double)>* revuz_density) {
    spec.validate();
    cfg.validate();
    if (!spec.interval.contains(x0)) throw DomainError("walk start outside interval");

    NaturalScaleSpeed nss(spec);
    const ScaleFunction& p = *spec.scale;
    Rng rng(derive_seed(cfg.seed, 1, 0));
    auto f = [&](double x) { return revuz_density ? (*revuz_density)(x) : 0.0; };

    RadialPath path;
    Recorder rec(path, cfg.record_path, revuz_density != nullptr);
    const double z0 = p.eval(x0);
    double t = 0.0, A = 0.0;
    rec.push(0.0, x0, 0.0);

    if (cfg.exit_band) {
        const auto [a, b] = *cfg.exit_band;
        if (!(spec.interval.lo < a && b < spec.interval.hi && a < x0 && x0 < b))
            throw DomainError("exit band must satisfy e0 < a < x0 < b < e1");
        const double za = p.eval(a), zb = p.eval(b);
        const int cells = std::max<int>(1, static_cast<int>(std::ceil((zb - za) / cfg.step_h)));
        const double h = (zb - za) / cells;

        std::vector<NodeData> node(static_cast<std::size_t>(cells) + 1);
        for (int i = 0; i <= cells; ++i) {
            const double z = za + h * i;
            node[i].x = i == 0 ? a : (i == cells ? b : nss.to_state(z));
            if (i > 0 && i < cells) {
                node[i].dt = nss.hold_time(z - h, z, z + h);
                node[i].f = f(node[i].x);
            }
        }

        // exact-martingale entry onto the lattice
        int i = static_cast<int>(std::floor((z0 - za) / h));
        i = std::clamp(i, 0, cells - 1);
        const double frac = (z0 - (za + h * i)) / h;
        if (frac > 1e-14 && frac < 1.0 - 1e-14) {
            t += nss.hold_time(za + h * i, z0, za + h * (i + 1));
            A += f(x0) * (t - 0.0);
            ++path.steps;
            i += (rng.uniform() < frac) ? 1 : 0;
            rec.push(t, node[i].x, A);
        } else if (frac >= 1.0 - 1e-14) {
            ++i;
        }

        while (true) {
            if (i == 0 || i == cells) {
                path.exit_flag = i == 0 ? ExitFlag::HitLower : ExitFlag::HitUpper;
                rec.push(t, node[i].x, A);
                break;
            }
            if (path.steps >= cfg.max_steps) {
                path.exit_flag = ExitFlag::BudgetExhausted;
                rec.push(t, node[i].x, A);
                break;
            }
            t += node[i].dt;
            A += node[i].f * node[i].dt;
            ++path.steps;
            i += rng.coin() ? 1 : -1;
            rec.push(t, node[i].x, A);
        }
        return path;
    }

    // horizon mode: lattice anchored at z0, lazily extended in both directions;
    // endpoints approachable in finite time are absorbing barriers
    const double horizon = *cfg.horizon;
    const double h = cfg.step_h;
    const double cref = default_reference_point(spec);
    const BoundaryReport lo_rep = classify_endpoint(spec, EndpointSide::Lower, cref);
    const BoundaryReport hi_rep = classify_endpoint(spec, EndpointSide::Upper, cref);
    const double beta_lo = lo_rep.scale_limit; // -inf when unapproachable
    const double beta_hi = hi_rep.scale_limit;

    std::deque<NodeData> nodes;      // index k -> nodes[k - base]
    long base = 0;                   // lattice index of nodes.front()
    auto node_at = [&](long k) -> NodeData& {
        while (k < base) {
            nodes.push_front(NodeData{});
            nodes.front().x = std::numeric_limits<double>::quiet_NaN();
            --base;
        }
        while (k - base >= static_cast<long>(nodes.size())) {
            nodes.push_back(NodeData{});
            nodes.back().x = std::numeric_limits<double>::quiet_NaN();
        }
        NodeData& nd = nodes[static_cast<std::size_t>(k - base)];
        if (std::isnan(nd.x)) {
            const double z = z0 + h * k;
            nd.x = nss.to_state(z);
            const double zl = std::max(z - h, beta_lo);
            const double zr = std::min(z + h, beta_hi);
            // a non-absorbing endpoint inside reach means infinite speed mass there
            const bool lo_wall = z - h < beta_lo && !lo_rep.approachable_finite_time;
            const bool hi_wall = z + h > beta_hi && !hi_rep.approachable_finite_time;
            nd.dt = (lo_wall || hi_wall) ? kInf : nss.hold_time(zl, z, zr);
            nd.f = f(nd.x);
        }
        return nd;
    };

    long k = 0;
    while (true) {
        if (path.steps >= cfg.max_steps) {
            path.exit_flag = ExitFlag::BudgetExhausted;
            rec.push(t, node_at(k).x, A);
            break;
        }
        NodeData& nd = node_at(k);
        const double z = z0 + h * k;
        const double dt = nd.dt;
        if (t + dt >= horizon) {
            A += nd.f * (horizon - t);
            path.exit_flag = ExitFlag::Horizon;
            rec.push(horizon, nd.x, A);
            break;
        }
        t += dt;
        A += nd.f * dt;
        ++path.steps;

        const bool lo_barrier = lo_rep.approachable_finite_time && z - h < beta_lo;
        const bool hi_barrier = hi_rep.approachable_finite_time && z + h > beta_hi;
        if (lo_barrier) {
            const double alpha = h / (z + h - beta_lo);
            if (rng.uniform() < alpha) {
                path.exit_flag = ExitFlag::HitLower;
                rec.push(t, spec.interval.lo, A);
                break;
            }
            ++k;
        } else if (hi_barrier) {
            const double alpha = h / (beta_hi - (z - h));
            if (rng.uniform() < alpha) {
                path.exit_flag = ExitFlag::HitUpper;
                rec.push(t, spec.interval.hi, A);
                break;
            }
            --k;
        } else {
            k += rng.coin() ? 1 : -1;
        }
        rec.push(t, node_at(k).x, A);
    }
    return path;
}

RadialPath simulate_pcaf(const DiffusionSpec& spec, const RadialPath& path,
                         const std::function<double(double)>& revuz_density) {
    spec.validate();
    if (path.times.empty()) throw DomainError("pcaf needs a recorded path");
    RadialPath out = path;
    out.pcaf.assign(path.times.size(), 0.0);
    double A = 0.0;
    for (std::size_t k = 1; k < path.times.size(); ++k) {
        A += (path.times[k] - path.times[k - 1]) * revuz_density(path.states[k - 1]);
        out.pcaf[k] = A;
    }
    out.final_pcaf = A;
    return out;
}

} // namespace dforge
