#pragma once

#include "dforge/scale.hpp"
#include "dforge/speed.hpp"

namespace dforge {

/// The (scale, speed) pair of a minimal diffusion on an open interval:
/// absorbed at any endpoint approachable in finite time, no killing inside.
struct DiffusionSpec {
    Interval interval{0.0, kInf};
    ScalePtr scale;
    SpeedMeasure speed = SpeedMeasure::power(1.0, 0.0);

    void validate() const {
        if (!scale) throw ParamError("diffusion spec without a scale");
        if (scale->domain().lo != interval.lo || scale->domain().hi != interval.hi)
            throw ParamError("scale and spec must share the interval");
    }
};

enum class EndpointSide { Lower, Upper };
enum class VerdictSource { Analytic, Numeric };

struct BoundaryReport {
    EndpointSide endpoint = EndpointSide::Lower;
    double scale_limit = 0.0; ///< extended real
    bool approachable = false;
    bool approachable_finite_time = false;
    VerdictSource verdict_source = VerdictSource::Analytic;
};

struct GlobalProperties {
    bool irreducible = true;
    bool recurrent = false;
    bool transient = false;
    bool conservative = false;
};

/// Boundary behaviour at one endpoint. approachable iff the scale limit is
/// finite; approachable in finite time decided by convergence of
/// int l((x,c)) dp(x) toward the endpoint (analytic for catalogued families,
/// dyadic-shell test otherwise). The verdict does not depend on c.
BoundaryReport classify_endpoint(const DiffusionSpec& spec, EndpointSide side, double c);

/// Global properties: transient iff an endpoint is approachable, recurrent
/// otherwise, conservative iff no endpoint is approachable in finite time.
GlobalProperties classify_global(const DiffusionSpec& spec);
GlobalProperties classify_global(const DiffusionSpec& spec, double c);

/// P_x(hit b before a) = (p(x) - p(a)) / (p(b) - p(a)).
double hitting_probability(const DiffusionSpec& spec, double x, double a, double b);

/// Interior reference point for classification runs.
double default_reference_point(const DiffusionSpec& spec);

} // namespace dforge
