#pragma once

/// \file geometry.hpp
/// Minkowski four-vectors, closed parametrized loops and surfaces, and the
/// causal predicates built on them.
///
/// Conventions used throughout the library:
///   * metric signature (+,-,-,-): inner(p, x) = p.t x.t - p.x x.x - ...
///   * loops are maps gamma : [0,1] -> R^4 with gamma(0) = gamma(1),
///     tangents are derivatives with respect to the curve parameter
///   * surfaces are maps sigma : [0,1]^2 -> R^4; their boundary is the
///     counterclockwise concatenation of the four parameter edges
///     (v=0 forward, u=1 up, v=1 backward, u=0 down)

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

namespace linklab {

struct FourVector {
    double t = 0.0, x = 0.0, y = 0.0, z = 0.0;

    double operator[](int mu) const {
        switch (mu) {
            case 0: return t;
            case 1: return x;
            case 2: return y;
            default: return z;
        }
    }
    double& operator[](int mu) {
        switch (mu) {
            case 0: return t;
            case 1: return x;
            case 2: return y;
            default: return z;
        }
    }

    FourVector operator+(const FourVector& o) const { return {t + o.t, x + o.x, y + o.y, z + o.z}; }
    FourVector operator-(const FourVector& o) const { return {t - o.t, x - o.x, y - o.y, z - o.z}; }
    FourVector operator*(double s) const { return {t * s, x * s, y * s, z * s}; }
    FourVector operator-() const { return {-t, -x, -y, -z}; }
};

inline FourVector operator*(double s, const FourVector& v) { return v * s; }

double minkowski_inner(const FourVector& a, const FourVector& b);

/// Metric sign of component mu: +1 for t, -1 for x, y, z.
inline double metric_sign(int mu) { return mu == 0 ? 1.0 : -1.0; }

/// Covariant components: (t, -x, -y, -z).
inline FourVector lower_index(const FourVector& v) { return {v.t, -v.x, -v.y, -v.z}; }

double euclid_norm_sq(const FourVector& v);
double spatial_norm_sq(const FourVector& v);

using Mat4 = std::array<std::array<double, 4>, 4>;

/// Closed parametrized loop. Three serializable kinds plus a functional kind
/// used for surface boundaries and test deformations.
class ParamLoop {
  public:
    struct Polyline {
        std::vector<FourVector> verts;  // closed: last connects back to first
    };
    struct Circle {
        FourVector center;
        FourVector e1, e2;  // orthonormal, purely spatial
        double radius = 1.0;
    };
    /// gamma^mu(u) = a0[mu] + sum_k ( cs[mu][k] cos(2 pi (k+1) u)
    ///                              + sn[mu][k] sin(2 pi (k+1) u) )
    struct Fourier {
        std::array<double, 4> a0{};
        std::array<std::vector<double>, 4> cs, sn;
    };
    struct Path {
        std::function<FourVector(double)> pos;
        std::function<FourVector(double)> tan;
        std::vector<double> breaks{0.0, 1.0};
    };

    ParamLoop() = default;
    explicit ParamLoop(Polyline p);
    explicit ParamLoop(Circle c);
    explicit ParamLoop(Fourier f);
    explicit ParamLoop(Path p);

    FourVector position(double u) const;
    FourVector tangent(double u) const;

    /// Parameter values at which the loop is only piecewise smooth
    /// (polyline vertices); always contains 0 and 1.
    const std::vector<double>& breakpoints() const { return breaks_; }

    std::vector<FourVector> sample(int n) const;
    ParamLoop to_polyline(int n) const;

    /// The loop with all time components scaled by the given factor.
    ParamLoop time_scaled(double factor) const;

    /// The same curve traversed in the opposite direction.
    ParamLoop reversed() const;

    FourVector centroid(int samples = 256) const;

    /// Bound on the sampled loop: a spatial ball around center plus a time
    /// interval center.t +- time_radius. Splitting the axes keeps the bound
    /// tight for loops confined to a constant-time slice.
    struct Ball {
        FourVector center;
        double radius = 0.0;       // bounds 3d spatial distance from center
        double time_radius = 0.0;  // bounds |t - center.t|
    };
    Ball bounding_ball(int samples = 256) const;

    const std::variant<Polyline, Circle, Fourier, Path>& rep() const { return rep_; }

  private:
    std::variant<Polyline, Circle, Fourier, Path> rep_;
    std::vector<double> breaks_{0.0, 1.0};
};

/// Parametrized surface with first partials; boundary() follows the edge
/// convention in the file header.
class ParamSurface {
  public:
    struct Cone {
        ParamLoop loop;
        FourVector apex;
    };
    struct Func {
        std::function<FourVector(double, double)> pos;
        std::function<FourVector(double, double)> du;
        std::function<FourVector(double, double)> dv;
    };

    ParamSurface() = default;
    explicit ParamSurface(Cone c) : rep_(std::move(c)) {}
    explicit ParamSurface(Func f) : rep_(std::move(f)) {}

    FourVector position(double u, double v) const;
    FourVector d_u(double u, double v) const;
    FourVector d_v(double u, double v) const;

    /// Jacobian bivector sigma^{mu nu} = d_u^mu d_v^nu - d_u^nu d_v^mu.
    Mat4 jacobian(double u, double v) const;

    ParamLoop boundary() const;

    /// Parameter values where the surface is only piecewise smooth in u
    /// (cone over a polyline); always contains 0 and 1. Smooth in v.
    std::vector<double> u_breakpoints() const;

    const std::variant<Cone, Func>& rep() const { return rep_; }

  private:
    std::variant<Cone, Func> rep_;
};

// ---- causal predicates (sampled; resolution documented per operation) ----

/// True iff every pair of distinct sample points is spacelike separated with
/// relative margin tol in the normalized ratio inner(d,d)/|d|^2_euclid.
/// Nearby points on a loop with spacelike tangents approach a strictly
/// negative ratio, so the criterion is uniform over pairs.
bool is_spatial(const ParamLoop& l, int samples = 512, double tol = 1e-9);

/// True iff inner(d,d) < -margin^2 for every sampled cross pair (strict, so
/// coincident points always fail); margin is absolute, in length units.
bool is_spacelike_separated(const ParamLoop& a, const ParamLoop& b, int samples = 512,
                            double margin = 0.0);

/// Stage u of the homotopy that scales time components by (1-u):
/// u = 0 is the identity, u = 1 projects to the time-zero plane.
ParamLoop causal_projection(const ParamLoop& l, double u);

// ---- factories ----

ParamLoop make_circle(const FourVector& center, const FourVector& e1, const FourVector& e2,
                      double radius);
ParamLoop make_polyline(std::vector<FourVector> verts);

struct LinkedPair {
    ParamLoop first, second;
};

/// Canonical pair of disjoint spatial loops in the time-zero plane whose
/// linking number is the given integer: separated circles for 0, the Hopf
/// configuration for +-1, a core circle and a curve winding lambda times
/// around it on a torus for |lambda| >= 2. Minimum spatial separation of the
/// pair is 1.0 in every case.
LinkedPair make_torus_link_pair(int lambda);

/// Cone over the loop: sigma(u,v) = apex + v (gamma(u) - apex). The v=1 edge
/// traverses gamma; within the boundary convention it is traversed backward.
ParamSurface cone_surface(const ParamLoop& l, const FourVector& apex);

/// Every point of bound a is spacelike separated from every point of bound b
/// with at least the given margin: the worst case pairs the largest possible
/// time offset with the smallest possible spatial distance. Cheap sufficient
/// check used before asserting causal disjointness.
bool balls_spacelike_separated(const ParamLoop::Ball& a, const ParamLoop::Ball& b, double margin);

}  // namespace linklab
