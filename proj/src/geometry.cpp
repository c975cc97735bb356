#include "linklab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace linklab {

double minkowski_inner(const FourVector& a, const FourVector& b) {
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z;
}

double euclid_norm_sq(const FourVector& v) {
    return v.t * v.t + v.x * v.x + v.y * v.y + v.z * v.z;
}

double spatial_norm_sq(const FourVector& v) { return v.x * v.x + v.y * v.y + v.z * v.z; }

ParamLoop::ParamLoop(Polyline p) : rep_(std::move(p)) {
    const auto& verts = std::get<Polyline>(rep_).verts;
    if (verts.size() < 3) throw std::invalid_argument("polyline loop needs at least 3 vertices");
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (euclid_norm_sq(verts[(i + 1) % n] - verts[i]) == 0.0)
            throw std::invalid_argument("polyline loop has a zero-length segment");
    }
    breaks_.clear();
    for (std::size_t i = 0; i <= n; ++i) breaks_.push_back(double(i) / double(n));
}

ParamLoop::ParamLoop(Circle c) : rep_(std::move(c)) {}
ParamLoop::ParamLoop(Fourier f) : rep_(std::move(f)) {}
ParamLoop::ParamLoop(Path p) : rep_(std::move(p)) {
    breaks_ = std::get<Path>(rep_).breaks;
    if (breaks_.size() < 2 || breaks_.front() != 0.0 || breaks_.back() != 1.0)
        throw std::invalid_argument("path breakpoints must run from 0 to 1");
}

static double wrap01(double u) {
    double w = u - std::floor(u);
    return w;
}

FourVector ParamLoop::position(double u) const {
    return std::visit(
        [&](const auto& rep) -> FourVector {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Polyline>) {
                const std::size_t n = rep.verts.size();
                double s = wrap01(u) * double(n);
                std::size_t i = std::min<std::size_t>(std::size_t(s), n - 1);
                double frac = s - double(i);
                const FourVector& a = rep.verts[i];
                const FourVector& b = rep.verts[(i + 1) % n];
                return a + (b - a) * frac;
            } else if constexpr (std::is_same_v<T, Circle>) {
                double ph = 2.0 * M_PI * u;
                return rep.center + rep.e1 * (rep.radius * std::cos(ph)) +
                       rep.e2 * (rep.radius * std::sin(ph));
            } else if constexpr (std::is_same_v<T, Fourier>) {
                FourVector out;
                for (int mu = 0; mu < 4; ++mu) {
                    double acc = rep.a0[mu];
                    for (std::size_t k = 0; k < rep.cs[mu].size(); ++k)
                        acc += rep.cs[mu][k] * std::cos(2.0 * M_PI * double(k + 1) * u);
                    for (std::size_t k = 0; k < rep.sn[mu].size(); ++k)
                        acc += rep.sn[mu][k] * std::sin(2.0 * M_PI * double(k + 1) * u);
                    out[mu] = acc;
                }
                return out;
            } else {
                return rep.pos(u);
            }
        },
        rep_);
}

FourVector ParamLoop::tangent(double u) const {
    return std::visit(
        [&](const auto& rep) -> FourVector {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Polyline>) {
                const std::size_t n = rep.verts.size();
                double s = wrap01(u) * double(n);
                std::size_t i = std::min<std::size_t>(std::size_t(s), n - 1);
                return (rep.verts[(i + 1) % n] - rep.verts[i]) * double(n);
            } else if constexpr (std::is_same_v<T, Circle>) {
                double ph = 2.0 * M_PI * u;
                return rep.e1 * (-2.0 * M_PI * rep.radius * std::sin(ph)) +
                       rep.e2 * (2.0 * M_PI * rep.radius * std::cos(ph));
            } else if constexpr (std::is_same_v<T, Fourier>) {
                FourVector out;
                for (int mu = 0; mu < 4; ++mu) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < rep.cs[mu].size(); ++k) {
                        double w = 2.0 * M_PI * double(k + 1);
                        acc -= rep.cs[mu][k] * w * std::sin(w * u);
                    }
                    for (std::size_t k = 0; k < rep.sn[mu].size(); ++k) {
                        double w = 2.0 * M_PI * double(k + 1);
                        acc += rep.sn[mu][k] * w * std::cos(w * u);
                    }
                    out[mu] = acc;
                }
                return out;
            } else {
                return rep.tan(u);
            }
        },
        rep_);
}

std::vector<FourVector> ParamLoop::sample(int n) const {
    std::vector<FourVector> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) pts.push_back(position(double(i) / double(n)));
    return pts;
}

ParamLoop ParamLoop::to_polyline(int n) const {
    if (n < 3) throw std::invalid_argument("to_polyline: need at least 3 vertices");
    return ParamLoop(Polyline{sample(n)});
}

ParamLoop ParamLoop::time_scaled(double factor) const {
    return std::visit(
        [&](const auto& rep) -> ParamLoop {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Polyline>) {
                Polyline out = rep;
                for (auto& v : out.verts) v.t *= factor;
                return ParamLoop(out);
            } else if constexpr (std::is_same_v<T, Circle>) {
                Circle out = rep;
                out.center.t *= factor;
                return ParamLoop(out);
            } else if constexpr (std::is_same_v<T, Fourier>) {
                Fourier out = rep;
                out.a0[0] *= factor;
                for (auto& c : out.cs[0]) c *= factor;
                for (auto& s : out.sn[0]) s *= factor;
                return ParamLoop(out);
            } else {
                Path out;
                auto pos = rep.pos;
                auto tan = rep.tan;
                out.pos = [pos, factor](double u) {
                    FourVector p = pos(u);
                    p.t *= factor;
                    return p;
                };
                out.tan = [tan, factor](double u) {
                    FourVector p = tan(u);
                    p.t *= factor;
                    return p;
                };
                out.breaks = rep.breaks;
                return ParamLoop(out);
            }
        },
        rep_);
}

ParamLoop ParamLoop::reversed() const {
    Path out;
    ParamLoop self = *this;
    out.pos = [self](double u) { return self.position(1.0 - u); };
    out.tan = [self](double u) { return -self.tangent(1.0 - u); };
    out.breaks.clear();
    for (auto it = breaks_.rbegin(); it != breaks_.rend(); ++it) out.breaks.push_back(1.0 - *it);
    return ParamLoop(out);
}

FourVector ParamLoop::centroid(int samples) const {
    FourVector acc;
    for (const auto& p : sample(samples)) acc = acc + p;
    return acc * (1.0 / double(samples));
}

ParamLoop::Ball ParamLoop::bounding_ball(int samples) const {
    std::vector<FourVector> pts = sample(samples);
    double t_lo = pts[0].t, t_hi = pts[0].t;
    FourVector c = centroid(samples);
    for (const auto& p : pts) {
        t_lo = std::min(t_lo, p.t);
        t_hi = std::max(t_hi, p.t);
    }
    Ball b;
    b.center = c;
    b.center.t = 0.5 * (t_lo + t_hi);
    b.time_radius = 0.5 * (t_hi - t_lo);
    double r2 = 0.0;
    for (const auto& p : pts) r2 = std::max(r2, spatial_norm_sq(p - b.center));
    b.radius = std::sqrt(r2);
    return b;
}

FourVector ParamSurface::position(double u, double v) const {
    return std::visit(
        [&](const auto& rep) -> FourVector {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Cone>) {
                return rep.apex + (rep.loop.position(u) - rep.apex) * v;
            } else {
                return rep.pos(u, v);
            }
        },
        rep_);
}

FourVector ParamSurface::d_u(double u, double v) const {
    return std::visit(
        [&](const auto& rep) -> FourVector {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Cone>) {
                return rep.loop.tangent(u) * v;
            } else {
                return rep.du(u, v);
            }
        },
        rep_);
}

FourVector ParamSurface::d_v(double u, double v) const {
    return std::visit(
        [&](const auto& rep) -> FourVector {
            using T = std::decay_t<decltype(rep)>;
            if constexpr (std::is_same_v<T, Cone>) {
                return rep.loop.position(u) - rep.apex;
            } else {
                return rep.dv(u, v);
            }
        },
        rep_);
}

Mat4 ParamSurface::jacobian(double u, double v) const {
    FourVector a = d_u(u, v), b = d_v(u, v);
    Mat4 j{};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) j[mu][nu] = a[mu] * b[nu] - a[nu] * b[mu];
    return j;
}

ParamLoop ParamSurface::boundary() const {
    ParamSurface self = *this;
    ParamLoop::Path p;
    p.pos = [self](double t) -> FourVector {
        t = wrap01(t) == 0.0 && t >= 1.0 ? 1.0 : wrap01(t);
        if (t < 0.25) return self.position(4.0 * t, 0.0);
        if (t < 0.5) return self.position(1.0, 4.0 * t - 1.0);
        if (t < 0.75) return self.position(3.0 - 4.0 * t, 1.0);
        return self.position(0.0, 4.0 - 4.0 * t);
    };
    p.tan = [self](double t) -> FourVector {
        t = wrap01(t) == 0.0 && t >= 1.0 ? 1.0 : wrap01(t);
        if (t < 0.25) return self.d_u(4.0 * t, 0.0) * 4.0;
        if (t < 0.5) return self.d_v(1.0, 4.0 * t - 1.0) * 4.0;
        if (t < 0.75) return self.d_u(3.0 - 4.0 * t, 1.0) * -4.0;
        return self.d_v(0.0, 4.0 - 4.0 * t) * -4.0;
    };
    p.breaks = {0.0, 0.25, 0.5, 0.75, 1.0};
    return ParamLoop(p);
}

std::vector<double> ParamSurface::u_breakpoints() const {
    if (const auto* c = std::get_if<Cone>(&rep_)) return c->loop.breakpoints();
    return {0.0, 1.0};
}

bool is_spatial(const ParamLoop& l, int samples, double tol) {
    if (samples < 3) throw std::invalid_argument("is_spatial: need at least 3 samples");
    std::vector<FourVector> pts = l.sample(samples);
    for (int i = 0; i < samples; ++i) {
        for (int j = i + 1; j < samples; ++j) {
            FourVector d = pts[i] - pts[j];
            double e2 = euclid_norm_sq(d);
            if (e2 == 0.0) continue;
            if (minkowski_inner(d, d) > -tol * e2) return false;
        }
    }
    return true;
}

bool is_spacelike_separated(const ParamLoop& a, const ParamLoop& b, int samples, double margin) {
    if (samples < 2) throw std::invalid_argument("is_spacelike_separated: need at least 2 samples");
    std::vector<FourVector> pa = a.sample(samples), pb = b.sample(samples);
    for (const auto& p : pa) {
        for (const auto& q : pb) {
            FourVector d = p - q;
            if (!(minkowski_inner(d, d) < -margin * margin)) return false;
        }
    }
    return true;
}

ParamLoop causal_projection(const ParamLoop& l, double u) {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("causal_projection: stage must be in [0,1]");
    return l.time_scaled(1.0 - u);
}

ParamLoop make_circle(const FourVector& center, const FourVector& e1, const FourVector& e2,
                      double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("make_circle: radius must be positive");
    auto spatial_unit = [](const FourVector& e) {
        return std::abs(e.t) < 1e-12 && std::abs(spatial_norm_sq(e) - 1.0) < 1e-9;
    };
    if (!spatial_unit(e1) || !spatial_unit(e2))
        throw std::invalid_argument("make_circle: frame vectors must be spatial unit vectors");
    if (std::abs(e1.x * e2.x + e1.y * e2.y + e1.z * e2.z) > 1e-9)
        throw std::invalid_argument("make_circle: frame vectors must be orthogonal");
    return ParamLoop(ParamLoop::Circle{center, e1, e2, radius});
}

ParamLoop make_polyline(std::vector<FourVector> verts) {
    return ParamLoop(ParamLoop::Polyline{std::move(verts)});
}

LinkedPair make_torus_link_pair(int lambda) {
    const FourVector ex{0, 1, 0, 0}, ey{0, 0, 1, 0}, ez{0, 0, 0, 1};
    if (lambda == 0) {
        return {make_circle({0, 0, 0, 0}, ex, ey, 1.0), make_circle({0, 3, 0, 0}, ex, ey, 1.0)};
    }
    if (lambda == 1 || lambda == -1) {
        ParamLoop a = make_circle({0, 0, 0, 0}, ex, ey, 1.0);
        ParamLoop b = make_circle({0, 1, 0, 0}, ex, lambda > 0 ? -ez : ez, 1.0);
        return {a, b};
    }
    const double R = 1.25, rho = 1.0;
    ParamLoop core = make_circle({0, 0, 0, 0}, ex, ey, R);
    // (1, lambda) curve on the torus of minor radius rho around the core;
    // the z orientation is chosen so the pair links +lambda.
    ParamLoop::Fourier f;
    auto add_cos = [&f](int mu, int freq, double c) {
        if (freq == 0) {
            f.a0[mu] += c;
            return;
        }
        int k = std::abs(freq);
        if (int(f.cs[mu].size()) < k) f.cs[mu].resize(k, 0.0);
        f.cs[mu][k - 1] += c;
    };
    auto add_sin = [&f](int mu, int freq, double s) {
        if (freq == 0) return;
        int k = std::abs(freq);
        if (int(f.sn[mu].size()) < k) f.sn[mu].resize(k, 0.0);
        f.sn[mu][k - 1] += freq > 0 ? s : -s;
    };
    add_cos(1, 1, R);
    add_cos(1, lambda + 1, rho / 2.0);
    add_cos(1, lambda - 1, rho / 2.0);
    add_sin(2, 1, R);
    add_sin(2, lambda + 1, rho / 2.0);
    add_sin(2, lambda - 1, -rho / 2.0);
    add_sin(3, lambda, -rho);
    return {core, ParamLoop(f)};
}

ParamSurface cone_surface(const ParamLoop& l, const FourVector& apex) {
    return ParamSurface(ParamSurface::Cone{l, apex});
}

bool balls_spacelike_separated(const ParamLoop::Ball& a, const ParamLoop::Ball& b, double margin) {
    FourVector d = a.center - b.center;
    double spatial = std::sqrt(spatial_norm_sq(d)) - a.radius - b.radius;
    if (spatial <= 0.0) return false;
    double time = std::abs(d.t) + a.time_radius + b.time_radius;
    return spatial * spatial - time * time >= margin * margin;
}

}  // namespace linklab
