#include "bpsgcn/geometry.hpp"

#include "bpsgcn/errors.hpp"

#include <algorithm>

namespace bpsgcn {

VelocitySequence velocities(const std::vector<Vec2>& positions, double dt) {
    if (positions.size() < 2)
        throw ArgumentError("velocities: need at least 2 positions");
    if (!(dt > 0.0)) throw ArgumentError("velocities: dt must be positive");
    VelocitySequence v;
    v.reserve(positions.size() - 1);
    for (std::size_t i = 1; i < positions.size(); ++i)
        v.push_back((positions[i] - positions[i - 1]) / dt);
    return v;
}

std::vector<double> cos_angles(const VelocitySequence& v) {
    if (v.size() < 2) throw ArgumentError("cos_angles: need at least 2 velocities");
    std::vector<double> out;
    out.reserve(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double na = v[i].norm();
        const double nb = v[i - 1].norm();
        if (na < kVelocityEps || nb < kVelocityEps) {
            out.push_back(1.0); // stationary convention: no turning
            continue;
        }
        double c = v[i].dot(v[i - 1]) / (na * nb);
        // rounding can push the ratio a hair outside [-1, 1]
        out.push_back(std::clamp(c, -1.0, 1.0));
    }
    return out;
}

std::vector<double> accel_magnitudes(const VelocitySequence& v, double dt) {
    if (v.size() < 2) throw ArgumentError("accel_magnitudes: need at least 2 velocities");
    if (!(dt > 0.0)) throw ArgumentError("accel_magnitudes: dt must be positive");
    std::vector<double> out;
    out.reserve(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i) out.push_back((v[i] - v[i - 1]).norm() / dt);
    return out;
}

GeometricSequence geometric_sequence(const std::vector<Vec2>& positions, double dt) {
    if (positions.size() < 3)
        throw ArgumentError("geometric_sequence: need at least 3 positions");
    const VelocitySequence v = velocities(positions, dt);
    const std::vector<double> cos = cos_angles(v);
    const std::vector<double> acc = accel_magnitudes(v, dt);
    GeometricSequence g(cos.size());
    for (std::size_t i = 0; i < cos.size(); ++i) g[i] = GeometricStep{cos[i], acc[i]};
    return g;
}

std::vector<VelocitySequence> goal_relative(const std::vector<VelocitySequence>& observed,
                                            const std::vector<Vec2>& endpoint) {
    if (observed.size() != endpoint.size())
        throw ArgumentError("goal_relative: one endpoint per agent required");
    std::vector<VelocitySequence> out(observed.size());
    for (std::size_t a = 0; a < observed.size(); ++a) {
        out[a].reserve(observed[a].size());
        for (const Vec2& v : observed[a]) out[a].push_back(v - endpoint[a]);
    }
    return out;
}

} // namespace bpsgcn
