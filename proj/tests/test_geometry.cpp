#include "bpsgcn/geometry.hpp"

#include "bpsgcn/errors.hpp"
#include "bpsgcn/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace bpsgcn;

TEST_CASE("velocities: unit step, stationary, arithmetic") {
    CHECK(velocities({{0, 0}, {1, 0}})[0] == Vec2(1, 0));
    CHECK(velocities({{0, 0}, {0, 0}})[0] == Vec2(0, 0));
    const auto v = velocities({{0, 0}, {1, 0}, {3, 0}});
    CHECK(v[0] == Vec2(1, 0));
    CHECK(v[1] == Vec2(2, 0));
    CHECK_THROWS_AS(velocities({{0, 0}}), ArgumentError);
    CHECK_THROWS_AS(velocities({{0, 0}, {1, 1}}, 0.0), ArgumentError);
}

TEST_CASE("cos_angles: parallel, perpendicular, stationary convention") {
    CHECK(cos_angles({{1, 0}, {1, 0}})[0] == doctest::Approx(1.0));
    CHECK(cos_angles({{1, 0}, {0, 1}})[0] == doctest::Approx(0.0));
    CHECK(cos_angles({{1, 0}, {0, 0}})[0] == doctest::Approx(1.0));
    CHECK(cos_angles({{0, 0}, {0, 0}})[0] == doctest::Approx(1.0));
    CHECK_THROWS_AS(cos_angles({{1, 0}}), ArgumentError);
}

TEST_CASE("accel_magnitudes: straight, constant, diagonal") {
    CHECK(accel_magnitudes({{1, 0}, {2, 0}})[0] == doctest::Approx(1.0));
    CHECK(accel_magnitudes({{1, 0}, {1, 0}})[0] == doctest::Approx(0.0));
    // |(0,1) - (1,0)| = sqrt(2), hand evaluation of the acceleration formula
    CHECK(accel_magnitudes({{1, 0}, {0, 1}})[0] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("geometric_sequence has length T-2 and respects bounds") {
    std::vector<Vec2> pos;
    Rng rng(5);
    Vec2 p(0, 0);
    for (int i = 0; i < 8; ++i) {
        pos.push_back(p);
        p += Vec2(1.0 + 0.1 * rng.normal(), 0.2 * rng.normal());
    }
    const GeometricSequence g = geometric_sequence(pos);
    REQUIRE(g.size() == 6);
    for (const auto& s : g) {
        CHECK(s.cos_theta >= -1.0);
        CHECK(s.cos_theta <= 1.0);
        CHECK(s.accel_mag >= 0.0);
    }
}

TEST_CASE("geometric features are invariant to rotation and translation") {
    Rng rng(17);
    std::vector<Vec2> pos;
    Vec2 p(2, -3);
    for (int i = 0; i < 10; ++i) {
        pos.push_back(p);
        p += Vec2(0.5 + 0.3 * rng.normal(), 0.4 * rng.normal());
    }
    const GeometricSequence base = geometric_sequence(pos);

    for (double angle : {0.3, 1.2, 2.9}) {
        const double c = std::cos(angle), s = std::sin(angle);
        std::vector<Vec2> moved;
        for (const Vec2& q : pos)
            moved.push_back(Vec2(c * q.x() - s * q.y() + 11.0, s * q.x() + c * q.y() - 7.0));
        const GeometricSequence got = geometric_sequence(moved);
        REQUIRE(got.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(std::abs(got[i].cos_theta - base[i].cos_theta) < 1e-9);
            CHECK(std::abs(got[i].accel_mag - base[i].accel_mag) < 1e-9);
        }
    }
}

TEST_CASE("scaling positions scales accel_mag and fixes cos_theta") {
    Rng rng(23);
    std::vector<Vec2> pos;
    Vec2 p(0, 0);
    for (int i = 0; i < 9; ++i) {
        pos.push_back(p);
        p += Vec2(1.0 + 0.2 * rng.normal(), 0.3 * rng.normal());
    }
    const double scale = 3.5;
    std::vector<Vec2> scaled;
    for (const Vec2& q : pos) scaled.push_back(scale * q);
    const GeometricSequence a = geometric_sequence(pos);
    const GeometricSequence b = geometric_sequence(scaled);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(b[i].cos_theta - a[i].cos_theta) < 1e-9);
        CHECK(b[i].accel_mag == doctest::Approx(scale * a[i].accel_mag));
    }
}

TEST_CASE("goal_relative: identity, zeroing, inverse") {
    const std::vector<VelocitySequence> seqs{{{1, 1}, {2, 2}}, {{3, 0}, {3, 0}}};

    auto same = goal_relative(seqs, {{0, 0}, {0, 0}});
    CHECK(same[0][1] == Vec2(2, 2));

    auto zeroed = goal_relative({{{5, -2}, {5, -2}}}, {{5, -2}});
    CHECK(zeroed[0][0] == Vec2(0, 0));
    CHECK(zeroed[0][1] == Vec2(0, 0));

    const std::vector<Vec2> endpoints{{1, -1}, {0, 2}};
    auto shifted = goal_relative(seqs, endpoints);
    for (std::size_t a = 0; a < seqs.size(); ++a)
        for (std::size_t t = 0; t < seqs[a].size(); ++t)
            CHECK(shifted[a][t] + endpoints[a] == seqs[a][t]);

    CHECK_THROWS_AS(goal_relative(seqs, {{0, 0}}), ArgumentError);
}
