#pragma once

#include "dforge/diffusion.hpp"
#include "dforge/rng.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace dforge {

enum class ExitFlag { Horizon, HitLower, HitUpper, BudgetExhausted };

struct WalkConfig {
    double step_h = 1e-2;              ///< lattice step in the natural-scale coordinate
    std::uint64_t max_steps = 2'000'000;
    std::uint64_t seed = 0;
    std::optional<double> horizon;                        ///< run until process time T
    std::optional<std::pair<double, double>> exit_band;   ///< or until exit of (a, b)
    bool record_path = true;
    double sphere_dt = 1e-3;           ///< angular substep for skew products

    void validate() const {
        if (!(step_h > 0)) throw ParamError("walk step must be positive");
        if (max_steps == 0) throw ParamError("walk needs a positive step budget");
        if (horizon.has_value() == exit_band.has_value())
            throw ParamError("walk needs exactly one of horizon / exit band");
        if (horizon && !(*horizon > 0)) throw ParamError("horizon must be positive");
        if (exit_band && !(exit_band->first < exit_band->second))
            throw ParamError("exit band requires a < b");
    }
};

struct RadialPath {
    std::vector<double> times;   ///< strictly increasing, starts at 0
    std::vector<double> states;  ///< x-space positions, matching times
    std::vector<double> pcaf;    ///< empty unless a Revuz density was attached
    ExitFlag exit_flag = ExitFlag::Horizon;
    std::uint64_t steps = 0;
    double final_time = 0.0;
    double final_state = 0.0;
    double final_pcaf = 0.0;
};

/// Pushforward of the speed measure to the natural-scale coordinate z = p(x):
/// mass((z1, z2]) = l((q(z1), q(z2)]).
class NaturalScaleSpeed {
public:
    explicit NaturalScaleSpeed(const DiffusionSpec& spec);

    double to_state(double z) const; ///< q(z)
    double mass(double z1, double z2) const;

    /// Expected holding time of the interval (zl, zr) started at zc:
    /// integral of twice the Green function peak profile against the measure.
    double hold_time(double zl, double zc, double zr) const;

private:
    const DiffusionSpec& spec_;
};

/// Speed-measure random walk on the natural-scale lattice: from z jump to
/// z +- h with probability 1/2, holding for the deterministic expected time;
/// exact-martingale entry and boundary steps keep hitting probabilities
/// unbiased for any h. Endpoints approachable in finite time absorb.
RadialPath simulate_path(const DiffusionSpec& spec, double x0, const WalkConfig& cfg,
                         const std::function<double(double)>* revuz_density = nullptr);

/// Attach the additive-functional trace A to an existing path:
/// increments (t_{k+1} - t_k) * f(x_k), nondecreasing from 0.
RadialPath simulate_pcaf(const DiffusionSpec& spec, const RadialPath& path,
                         const std::function<double(double)>& revuz_density);

} // namespace dforge
