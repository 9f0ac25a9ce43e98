#pragma once

#include "bpsgcn/data.hpp"

#include <vector>

namespace bpsgcn {

/// Step feature pair: turning cosine and acceleration magnitude.
struct GeometricStep {
    double cos_theta;  // in [-1, 1]
    double accel_mag;  // scene units / step^2, >= 0
};

using VelocitySequence = std::vector<Vec2>;
using GeometricSequence = std::vector<GeometricStep>;

/// Norm threshold below which a velocity counts as stationary. Far below any
/// real displacement at dataset scales.
constexpr double kVelocityEps = 1e-8;

/// v_t = (p_t - p_{t-1}) / dt; length is positions.size() - 1.
VelocitySequence velocities(const std::vector<Vec2>& positions, double dt = 1.0);

/// cos(theta_t) between consecutive velocities. When either norm is below
/// kVelocityEps the angle is undefined and the stationary convention emits
/// 1.0 (no turning). Length is v.size() - 1.
std::vector<double> cos_angles(const VelocitySequence& v);

/// |a_t| = |v_t - v_{t-1}| / dt. Length is v.size() - 1.
std::vector<double> accel_magnitudes(const VelocitySequence& v, double dt = 1.0);

/// Full per-step feature series for one agent; length positions.size() - 2.
GeometricSequence geometric_sequence(const std::vector<Vec2>& positions, double dt = 1.0);

/// Subtracts each agent's endpoint velocity from every step of its sequence.
/// Invertible given the endpoint.
std::vector<VelocitySequence> goal_relative(const std::vector<VelocitySequence>& observed,
                                            const std::vector<Vec2>& endpoint);

} // namespace bpsgcn
