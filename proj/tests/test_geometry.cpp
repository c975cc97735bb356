#include "linklab/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace linklab;

namespace {

const FourVector ex{0, 1, 0, 0};
const FourVector ey{0, 0, 1, 0};
const FourVector ez{0, 0, 0, 1};

bool close(const FourVector& a, const FourVector& b, double tol = 1e-12) {
    return std::sqrt(euclid_norm_sq(a - b)) <= tol;
}

double min_cross_distance(const ParamLoop& a, const ParamLoop& b, int n) {
    auto pa = a.sample(n), pb = b.sample(n);
    double best = 1e300;
    for (const auto& p : pa)
        for (const auto& q : pb) best = std::min(best, std::sqrt(euclid_norm_sq(p - q)));
    return best;
}

}  // namespace

TEST_CASE("four vector algebra and metric") {
    FourVector v{1, 2, 3, 4};
    CHECK(v[0] == 1.0);
    CHECK(v[3] == 4.0);
    CHECK(minkowski_inner(v, v) == doctest::Approx(1 - 4 - 9 - 16));
    CHECK(minkowski_inner(FourVector{1, 0, 0, 0}, FourVector{1, 0, 0, 0}) == 1.0);
    CHECK(metric_sign(0) == 1.0);
    CHECK(metric_sign(2) == -1.0);
    FourVector lo = lower_index(v);
    CHECK(lo.t == 1.0);
    CHECK(lo.y == -3.0);
    CHECK(euclid_norm_sq(v) == doctest::Approx(30.0));
    CHECK(spatial_norm_sq(v) == doctest::Approx(29.0));
}

TEST_CASE("circle loop geometry") {
    FourVector c{0.5, 1, 2, 3};
    ParamLoop l = make_circle(c, ex, ey, 2.0);
    CHECK(close(l.position(0.0), c + 2.0 * ex));
    CHECK(close(l.position(0.25), c + 2.0 * ey));
    CHECK(close(l.position(0.5), c - 2.0 * ex));
    CHECK(close(l.position(0.0), l.position(1.0)));
    CHECK(close(l.tangent(0.0), 4.0 * M_PI * ey));
    CHECK(close(l.tangent(0.25), -4.0 * M_PI * ex));
    CHECK(close(l.centroid(512), c, 1e-9));
    auto ball = l.bounding_ball(512);
    CHECK(ball.radius == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(ball.time_radius == doctest::Approx(0.0));
    CHECK(ball.center.t == doctest::Approx(0.5));
}

TEST_CASE("make_circle validates its frame") {
    CHECK_THROWS_AS(make_circle({}, ex, ey, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_circle({}, 2.0 * ex, ey, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_circle({}, ex, ex, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_circle({}, FourVector{1, 1, 0, 0}, ey, 1.0), std::invalid_argument);
}

TEST_CASE("polyline loop geometry") {
    std::vector<FourVector> square = {{0, 0, 0, 0}, {0, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 0}};
    ParamLoop l = make_polyline(square);
    CHECK(close(l.position(0.125), FourVector{0, 0.5, 0, 0}));
    CHECK(close(l.position(0.5), FourVector{0, 1, 1, 0}));
    CHECK(close(l.position(7.0 / 8.0), FourVector{0, 0, 0.5, 0}));
    CHECK(close(l.position(0.0), l.position(1.0)));
    CHECK(close(l.tangent(0.1), FourVector{0, 4, 0, 0}));
    CHECK(close(l.tangent(0.9), FourVector{0, 0, -4, 0}));
    const auto& br = l.breakpoints();
    REQUIRE(br.size() == 5);
    CHECK(br[1] == doctest::Approx(0.25));
    CHECK_THROWS_AS(make_polyline({{0, 0, 0, 0}, {0, 1, 0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_polyline({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 1, 0, 0}}),
                    std::invalid_argument);
}

TEST_CASE("fourier loop with single harmonic matches the circle") {
    ParamLoop circle = make_circle({0, 0, 0, 0}, ex, ey, 1.5);
    ParamLoop::Fourier f;
    f.cs[1] = {1.5};
    f.sn[2] = {1.5};
    ParamLoop fl{f};
    for (double u : {0.0, 0.13, 0.37, 0.5, 0.77, 0.99}) {
        CHECK(close(fl.position(u), circle.position(u), 1e-12));
        CHECK(close(fl.tangent(u), circle.tangent(u), 1e-10));
    }
}

TEST_CASE("reversal flips orientation and keeps the point set") {
    ParamLoop l = make_circle({0, 0, 0, 0}, ex, ez, 1.0);
    ParamLoop r = l.reversed();
    for (double u : {0.0, 0.2, 0.65}) {
        CHECK(close(r.position(u), l.position(1.0 - u)));
        CHECK(close(r.tangent(u), -l.tangent(1.0 - u)));
    }
    const auto& br = r.breakpoints();
    REQUIRE(br.size() >= 2);
    CHECK(br.front() == 0.0);
    CHECK(br.back() == 1.0);
}

TEST_CASE("time scaling acts on the time component only") {
    ParamLoop::Fourier f;
    f.a0 = {2.0, 0.0, 0.0, 0.0};
    f.cs[0] = {0.5};
    f.cs[1] = {1.0};
    f.sn[2] = {1.0};
    ParamLoop l{f};
    ParamLoop s = l.time_scaled(0.25);
    for (double u : {0.0, 0.3, 0.8}) {
        FourVector p = l.position(u), q = s.position(u);
        CHECK(q.t == doctest::Approx(0.25 * p.t));
        CHECK(q.x == doctest::Approx(p.x));
        CHECK(q.y == doctest::Approx(p.y));
    }

    ParamLoop flat = causal_projection(l, 1.0);
    for (double u : {0.1, 0.6}) CHECK(flat.position(u).t == doctest::Approx(0.0));
    ParamLoop same = causal_projection(l, 0.0);
    CHECK(close(same.position(0.4), l.position(0.4)));
    CHECK_THROWS_AS(causal_projection(l, 1.5), std::invalid_argument);
}

TEST_CASE("surface boundary follows the counterclockwise edge convention") {
    ParamSurface::Func patch;
    patch.pos = [](double u, double v) { return FourVector{0, u, v, 0}; };
    patch.du = [](double, double) { return FourVector{0, 1, 0, 0}; };
    patch.dv = [](double, double) { return FourVector{0, 0, 1, 0}; };
    ParamSurface s{patch};

    ParamLoop b = s.boundary();
    CHECK(close(b.position(0.0), FourVector{0, 0, 0, 0}));
    CHECK(close(b.position(0.125), FourVector{0, 0.5, 0, 0}));
    CHECK(close(b.position(0.375), FourVector{0, 1, 0.5, 0}));
    CHECK(close(b.position(0.625), FourVector{0, 0.5, 1, 0}));
    CHECK(close(b.position(0.875), FourVector{0, 0, 0.5, 0}));
    CHECK(close(b.tangent(0.125), FourVector{0, 4, 0, 0}));
    CHECK(close(b.tangent(0.375), FourVector{0, 0, 4, 0}));
    CHECK(close(b.tangent(0.625), FourVector{0, -4, 0, 0}));
    CHECK(close(b.tangent(0.875), FourVector{0, 0, -4, 0}));
    REQUIRE(b.breakpoints().size() == 5);

    Mat4 j = s.jacobian(0.3, 0.7);
    CHECK(j[1][2] == doctest::Approx(1.0));
    CHECK(j[2][1] == doctest::Approx(-1.0));
    CHECK(j[0][3] == doctest::Approx(0.0));
    CHECK(j[1][1] == doctest::Approx(0.0));
}

TEST_CASE("cone surface interpolates apex to loop and its boundary reverses the loop") {
    ParamLoop l = make_circle({0, 0, 0, 0}, ex, ey, 1.0);
    FourVector apex{0.5, 0, 0, 0};
    ParamSurface cone = cone_surface(l, apex);

    CHECK(close(cone.position(0.3, 0.0), apex));
    CHECK(close(cone.position(0.3, 1.0), l.position(0.3)));
    CHECK(close(cone.d_v(0.3, 0.5), l.position(0.3) - apex));
    CHECK(close(cone.d_u(0.3, 0.5), 0.5 * l.tangent(0.3)));

    ParamLoop b = cone.boundary();
    CHECK(close(b.position(0.625), l.position(0.5)));
    CHECK(close(b.tangent(0.625), -4.0 * l.tangent(0.5)));
    CHECK(close(b.position(0.1), apex));
}

TEST_CASE("spatial loop predicate accepts constant-time and mildly tilted loops") {
    ParamLoop flat = make_circle({0, 0, 0, 0}, ex, ey, 1.0);
    CHECK(is_spatial(flat, 128));

    ParamLoop::Fourier tilt;
    tilt.cs[0] = {0.1};
    tilt.cs[1] = {1.0};
    tilt.sn[2] = {1.0};
    CHECK(is_spatial(ParamLoop{tilt}, 128));

    tilt.cs[0] = {2.0};
    CHECK_FALSE(is_spatial(ParamLoop{tilt}, 128));
}

TEST_CASE("spacelike separation of loop pairs") {
    ParamLoop a = make_circle({0, 0, 0, 0}, ex, ey, 1.0);
    ParamLoop b = make_circle({0, 3, 0, 0}, ex, ey, 1.0);
    CHECK(is_spacelike_separated(a, b, 256, 0.9));
    CHECK_FALSE(is_spacelike_separated(a, b, 256, 1.5));

    ParamLoop late = make_circle({3, 3, 0, 0}, ex, ey, 1.0);
    CHECK_FALSE(is_spacelike_separated(a, late, 256));
}

TEST_CASE("bound pair check splits time and space") {
    ParamLoop a = make_circle({0, 0, 0, 0}, ex, ey, 1.0);
    ParamLoop b = make_circle({0, 3, 0, 0}, ex, ey, 1.0);
    auto ba = a.bounding_ball(512), bb = b.bounding_ball(512);
    CHECK(balls_spacelike_separated(ba, bb, 0.9));
    CHECK_FALSE(balls_spacelike_separated(ba, bb, 1.1));

    ParamLoop late = make_circle({0.9, 3, 0, 0}, ex, ey, 1.0);
    CHECK_FALSE(balls_spacelike_separated(ba, late.bounding_ball(512), 0.5));
}

TEST_CASE("canonical link pairs are spatial, separated by one unit, and closed") {
    for (int lambda : {0, 1, -1, 2, 3, -2, 5}) {
        CAPTURE(lambda);
        LinkedPair pair = make_torus_link_pair(lambda);
        CHECK(close(pair.first.position(0.0), pair.first.position(1.0), 1e-10));
        CHECK(close(pair.second.position(0.0), pair.second.position(1.0), 1e-10));
        CHECK(is_spatial(pair.first, 192));
        CHECK(is_spatial(pair.second, 192));
        CHECK(is_spacelike_separated(pair.first, pair.second, 192, 0.9));
        double dmin = min_cross_distance(pair.first, pair.second, 512);
        CHECK(dmin == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("torus pair second component lies on the expected torus") {
    LinkedPair pair = make_torus_link_pair(3);
    const double R = 1.25, rho = 1.0;
    for (double u : {0.0, 0.11, 0.29, 0.5, 0.83}) {
        FourVector p = pair.second.position(u);
        double ring = std::sqrt(p.x * p.x + p.y * p.y) - R;
        CHECK(ring * ring + p.z * p.z == doctest::Approx(rho * rho).epsilon(1e-10));
        CHECK(p.t == doctest::Approx(0.0));
    }
}
