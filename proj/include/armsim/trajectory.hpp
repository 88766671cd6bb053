#pragma once

#include <array>
#include <vector>

#include "armsim/types.hpp"

namespace armsim {

struct NonPositiveDurationError : Error {
    using Error::Error;
};

struct OutOfRangeError : Error {
    using Error::Error;
};

struct MismatchedLengthsError : Error {
    using Error::Error;
};

struct TooFewSamplesError : Error {
    using Error::Error;
};

/// theta(t) = a0 + a1 t + a2 t^2 + a3 t^3 over t in [0, T].
struct CubicSegment {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double duration = 0.0;
};

struct TrajectorySample {
    double theta = 0.0;
    double thetadot = 0.0;
    double thetaddot = 0.0;
};

/// Cubic through boundary angles and velocities (closed form of the 4x4
/// boundary-condition system).
inline CubicSegment cubic_coeffs(double theta0, double thetaf, double v0, double vf, double t_f) {
    if (!(t_f > 0.0)) throw NonPositiveDurationError("segment duration must be > 0");
    const double delta = thetaf - theta0;
    CubicSegment seg;
    seg.a0 = theta0;
    seg.a1 = v0;
    seg.a2 = (3.0 * delta - (2.0 * v0 + vf) * t_f) / (t_f * t_f);
    seg.a3 = (-2.0 * delta + (v0 + vf) * t_f) / (t_f * t_f * t_f);
    seg.duration = t_f;
    return seg;
}

inline TrajectorySample eval_segment(const CubicSegment& seg, double t) {
    if (t < 0.0 || t > seg.duration)
        throw OutOfRangeError("t outside [0, T]");
    TrajectorySample s;
    s.theta = seg.a0 + t * (seg.a1 + t * (seg.a2 + t * seg.a3));
    s.thetadot = seg.a1 + t * (2.0 * seg.a2 + t * 3.0 * seg.a3);
    s.thetaddot = 2.0 * seg.a2 + 6.0 * seg.a3 * t;
    return s;
}

/// Per-joint piecewise cubic with rest (zero velocity) at every waypoint.
struct JointPath {
    std::array<std::vector<CubicSegment>, 6> segments;
    std::vector<double> knot_times; // knot_times[0] = 0

    double total_duration() const { return knot_times.empty() ? 0.0 : knot_times.back(); }

    /// Sample at time t; t is clamped to [0, total]. Returns q, qdot, qddot.
    void sample(double t, Vector6d& q, Vector6d& qdot, Vector6d& qddot) const {
        const double total = total_duration();
        double tc = t < 0.0 ? 0.0 : (t > total ? total : t);
        std::size_t k = 0;
        while (k + 2 < knot_times.size() && tc >= knot_times[k + 1]) ++k;
        const double local = tc - knot_times[k];
        for (int j = 0; j < 6; ++j) {
            const auto& seg = segments[j][k];
            const auto s = eval_segment(seg, std::min(local, seg.duration));
            q[j] = s.theta;
            qdot[j] = s.thetadot;
            qddot[j] = s.thetaddot;
        }
    }
};

/// Rest-to-rest cubic per segment through the given waypoints.
/// waypoints[w][j] is joint j's angle at waypoint w.
inline JointPath plan_multipoint(const std::vector<Vector6d>& waypoints,
                                 const std::vector<double>& segment_times) {
    if (waypoints.size() < 2)
        throw MismatchedLengthsError("at least 2 waypoints required");
    if (segment_times.size() != waypoints.size() - 1)
        throw MismatchedLengthsError("need one segment time per waypoint pair");
    JointPath path;
    path.knot_times.push_back(0.0);
    for (double t : segment_times) {
        if (!(t > 0.0)) throw NonPositiveDurationError("segment time must be > 0");
        path.knot_times.push_back(path.knot_times.back() + t);
    }
    for (int j = 0; j < 6; ++j) {
        path.segments[j].reserve(segment_times.size());
        for (std::size_t w = 0; w + 1 < waypoints.size(); ++w)
            path.segments[j].push_back(
                cubic_coeffs(waypoints[w][j], waypoints[w + 1][j], 0.0, 0.0, segment_times[w]));
    }
    return path;
}

/// Forward differences: velocities (n-1 entries) and accelerations (n-2).
inline std::pair<std::vector<double>, std::vector<double>>
finite_diff_rates(const std::vector<double>& samples, double dt) {
    if (samples.size() < 3)
        throw TooFewSamplesError("finite_diff_rates needs at least 3 samples");
    if (!(dt > 0.0)) throw Error("finite_diff_rates: dt must be > 0");
    std::vector<double> vel(samples.size() - 1);
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        vel[i] = (samples[i + 1] - samples[i]) / dt;
    std::vector<double> acc(vel.size() - 1);
    for (std::size_t i = 0; i + 1 < vel.size(); ++i)
        acc[i] = (vel[i + 1] - vel[i]) / dt;
    return {vel, acc};
}

} // namespace armsim
