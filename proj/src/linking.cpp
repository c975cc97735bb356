#include "linklab/linking.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <vector>

#include "linklab/quadrature.hpp"
#include "linklab/rng.hpp"

namespace linklab {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 spatial(const FourVector& v) { return {v.x, v.y, v.z}; }

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
    double n = norm(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

struct CurveNodes {
    std::vector<Vec3> pos, tan;
    std::vector<double> weight;
};

CurveNodes curve_nodes(const ParamLoop& l, int panels, int order) {
    CompositeRule r = composite_rule_broken(l.breakpoints(), panels, order);
    CurveNodes out;
    out.pos.reserve(r.node.size());
    out.tan.reserve(r.node.size());
    out.weight = r.weight;
    for (double u : r.node) {
        out.pos.push_back(spatial(l.position(u)));
        out.tan.push_back(spatial(l.tangent(u)));
    }
    return out;
}

double gauss_value(const ParamLoop& a, const ParamLoop& b, int panels, int order) {
    CurveNodes na = curve_nodes(a, panels, order);
    CurveNodes nb = curve_nodes(b, panels, order);
    double acc = 0.0;
    for (std::size_t i = 0; i < na.pos.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < nb.pos.size(); ++j) {
            Vec3 r = sub(na.pos[i], nb.pos[j]);
            double r2 = dot(r, r);
            double inv = 1.0 / (r2 * std::sqrt(r2));
            row += nb.weight[j] * det3(na.tan[i], nb.tan[j], r) * inv;
        }
        acc += na.weight[i] * row;
    }
    return acc / (4.0 * M_PI);
}

}  // namespace

LinkingEstimate gauss_linking(const ParamLoop& a, const ParamLoop& b, int panels, int order) {
    if (panels < 1 || order < 2) throw std::invalid_argument("gauss_linking: bad quadrature size");

    const int probe = 256;
    auto pa = a.sample(probe), pb = b.sample(probe);
    double dmin2 = 1e300, scale2 = 0.0;
    for (const auto& p : pa)
        for (const auto& q : pb) dmin2 = std::min(dmin2, spatial_norm_sq(p - q));
    auto ba = a.bounding_ball(probe), bb = b.bounding_ball(probe);
    scale2 = std::max(ba.radius * ba.radius, bb.radius * bb.radius);
    if (dmin2 < 1e-6 * std::max(scale2, 1e-30))
        throw std::domain_error("gauss_linking: curves closer than 1e-3 of their scale");

    double coarse = gauss_value(a, b, panels, order);
    double fine = gauss_value(a, b, 2 * panels, order);
    return {fine, std::abs(fine - coarse) + 1e-16};
}

namespace {

const std::vector<FourVector>& polyline_verts(const ParamLoop& l, const char* who) {
    const auto* p = std::get_if<ParamLoop::Polyline>(&l.rep());
    if (!p) throw std::invalid_argument(std::string(who) + ": loops must be polyline kind");
    return p->verts;
}

struct Projected {
    std::vector<double> px, py, depth;  // per vertex
};

Projected project(const std::vector<FourVector>& verts, const Vec3& p, const Vec3& q,
                  const Vec3& n) {
    Projected out;
    out.px.reserve(verts.size());
    for (const auto& v : verts) {
        Vec3 s = spatial(v);
        out.px.push_back(dot(s, p));
        out.py.push_back(dot(s, q));
        out.depth.push_back(dot(s, n));
    }
    return out;
}

// Signed crossing sum for one direction; degenerate geometry reported by flag.
bool crossing_sum(const std::vector<FourVector>& va, const std::vector<FourVector>& vb,
                  const Vec3& n, int& sum_out) {
    Vec3 h = std::abs(n[0]) < std::abs(n[1]) ? (std::abs(n[0]) < std::abs(n[2]) ? Vec3{1, 0, 0}
                                                                                : Vec3{0, 0, 1})
                                             : (std::abs(n[1]) < std::abs(n[2]) ? Vec3{0, 1, 0}
                                                                                : Vec3{0, 0, 1});
    Vec3 p{h[0] - dot(h, n) * n[0], h[1] - dot(h, n) * n[1], h[2] - dot(h, n) * n[2]};
    p = normalized(p);
    Vec3 q = cross(n, p);

    Projected A = project(va, p, q, n), B = project(vb, p, q, n);
    const std::size_t na = va.size(), nb = vb.size();

    double scale = 0.0;
    for (std::size_t i = 0; i < na; ++i) scale = std::max(scale, std::hypot(A.px[i], A.py[i]));
    for (std::size_t j = 0; j < nb; ++j) scale = std::max(scale, std::hypot(B.px[j], B.py[j]));
    scale = std::max(scale, 1e-30);
    const double tiny = 1e-10;

    int sum = 0;
    for (std::size_t i = 0; i < na; ++i) {
        std::size_t i2 = (i + 1) % na;
        double ax = A.px[i], ay = A.py[i];
        double dax = A.px[i2] - ax, day = A.py[i2] - ay;
        for (std::size_t j = 0; j < nb; ++j) {
            std::size_t j2 = (j + 1) % nb;
            double bx = B.px[j], by = B.py[j];
            double dbx = B.px[j2] - bx, dby = B.py[j2] - by;

            double denom = dax * dby - day * dbx;
            double rx = bx - ax, ry = by - ay;
            double s_num = rx * dby - ry * dbx;
            double t_num = rx * day - ry * dax;
            if (std::abs(denom) < tiny * scale * scale) {
                // Parallel in projection: degenerate only if the supports meet.
                double off = std::abs(rx * day - ry * dax);
                if (off < tiny * scale * scale) return false;
                continue;
            }
            double s = s_num / denom, t = t_num / denom;
            const double g = 1e-9;
            bool s_in = s > g && s < 1.0 - g, t_in = t > g && t < 1.0 - g;
            bool s_out = s < -g || s > 1.0 + g, t_out = t < -g || t > 1.0 + g;
            if (s_out || t_out) continue;
            if (!(s_in && t_in)) return false;  // endpoint grazing

            double da_depth = A.depth[i] + s * (A.depth[(i + 1) % na] - A.depth[i]);
            double db_depth = B.depth[j] + t * (B.depth[(j + 1) % nb] - B.depth[j]);
            double dz = da_depth - db_depth;
            if (std::abs(dz) < tiny * scale) return false;

            double ox, oy, ux, uy;
            if (dz > 0.0) {
                ox = dax, oy = day, ux = dbx, uy = dby;
            } else {
                ox = dbx, oy = dby, ux = dax, uy = day;
            }
            double orient = ox * uy - oy * ux;
            if (std::abs(orient) < tiny * scale * scale) return false;
            sum += orient > 0.0 ? 1 : -1;
        }
    }
    if (sum % 2 != 0) return false;  // a crossing was missed near an endpoint
    sum_out = sum;
    return true;
}

}  // namespace

int crossing_sign_linking(const ParamLoop& a, const ParamLoop& b, const FourVector& direction) {
    const auto& va = polyline_verts(a, "crossing_sign_linking");
    const auto& vb = polyline_verts(b, "crossing_sign_linking");
    Vec3 dir = spatial(direction);
    if (norm(dir) == 0.0)
        throw std::invalid_argument("crossing_sign_linking: direction must have a spatial part");
    dir = normalized(dir);

    std::mt19937_64 rng(0x5851f42d4c957f2dULL);
    for (int attempt = 0; attempt < 24; ++attempt) {
        Vec3 n = dir;
        if (attempt > 0) {
            double mag = 1e-3 * double(attempt);
            n = normalized({dir[0] + uniform(rng, -mag, mag), dir[1] + uniform(rng, -mag, mag),
                            dir[2] + uniform(rng, -mag, mag)});
        }
        int sum = 0;
        if (crossing_sum(va, vb, n, sum)) return sum / 2;
    }
    throw DegenerateProjection("crossing_sign_linking: no generic projection found");
}

int crossing_sign_linking(const ParamLoop& a, const ParamLoop& b) {
    return crossing_sign_linking(a, b, FourVector{0.0, 0.137, -0.541, 0.829});
}

int causal_linking_number(const ParamLoop& a, const ParamLoop& b, int segments, int panels) {
    if (!is_spatial(a) || !is_spatial(b))
        throw std::domain_error("causal_linking_number: loops must be spatial");
    if (!is_spacelike_separated(a, b))
        throw std::domain_error("causal_linking_number: loops must be spacelike separated");

    ParamLoop pa = causal_projection(a, 1.0), pb = causal_projection(b, 1.0);
    int count = crossing_sign_linking(pa.to_polyline(segments), pb.to_polyline(segments));

    LinkingEstimate est = gauss_linking(pa, pb, panels);
    if (std::abs(est.value - double(count)) >= 1e-3 || est.error >= 1e-3)
        est = gauss_linking(pa, pb, 2 * panels);
    if (std::abs(est.value - double(count)) >= 1e-3 || est.error >= 1e-3) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "causal_linking_number: engines disagree (crossings %d, quadrature %.6f "
                      "+- %.1e)",
                      count, est.value, est.error);
        throw EngineMismatch(msg);
    }
    return count;
}

}  // namespace linklab
