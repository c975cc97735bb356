#include "linklab/smearing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linklab/quadrature.hpp"

namespace linklab {

namespace {

// 1d bump machinery on [-1,1]: base(xi) = exp(-1/(1-xi^2)), beta = Int base.
double bump_base(double xi) {
    double d = 1.0 - xi * xi;
    if (d <= 0.0) return 0.0;
    return std::exp(-1.0 / d);
}

struct BumpTable {
    CompositeRule rule;           // on [-1,1]
    std::vector<double> wb;       // weight * base(node)
    double beta = 0.0;
    BumpTable() {
        rule = composite_rule(-1.0, 1.0, 24, 8);
        wb.resize(rule.node.size());
        for (std::size_t i = 0; i < rule.node.size(); ++i) {
            wb[i] = rule.weight[i] * bump_base(rule.node[i]);
            beta += wb[i];
        }
    }
};

const BumpTable& bump_table() {
    static const BumpTable t;
    return t;
}

// Normalized 1d profiles per atom (the same factor on every axis).
double profile_1d(const Mollifier::Atom& a, double tau) {
    if (a.is_bump) {
        const BumpTable& t = bump_table();
        return bump_base(tau / a.param) / (a.param * t.beta);
    }
    double w = a.param;
    return std::exp(-tau * tau / (2.0 * w * w)) / (w * std::sqrt(2.0 * M_PI));
}

// Cumulative Int_{-inf}^{tau} of the normalized 1d profile.
double cumulative_1d(const Mollifier::Atom& a, double tau) {
    if (a.is_bump) {
        double s = tau / a.param;
        if (s <= -1.0) return 0.0;
        if (s >= 1.0) return 1.0;
        const BumpTable& t = bump_table();
        CompositeRule r = composite_rule(-1.0, s, 12, 8);
        double acc = 0.0;
        for (std::size_t i = 0; i < r.node.size(); ++i)
            acc += r.weight[i] * bump_base(r.node[i]);
        return acc / t.beta;
    }
    return 0.5 * (1.0 + std::erf(tau / (a.param * std::sqrt(2.0))));
}

// 1d transform of the normalized profile at frequency a (even, real).
double transform_1d(const Mollifier::Atom& atom, double freq) {
    if (atom.is_bump) {
        const BumpTable& t = bump_table();
        double kappa = atom.param * freq;
        double acc = 0.0;
        for (std::size_t i = 0; i < t.rule.node.size(); ++i)
            acc += t.wb[i] * std::cos(kappa * t.rule.node[i]);
        return acc / t.beta;
    }
    double w = atom.param;
    return std::exp(-0.5 * w * w * freq * freq);
}

std::complex<double> phase(double theta) { return {std::cos(theta), -std::sin(theta)}; }

}  // namespace

std::complex<double> cone_phi(double q) {
    if (std::abs(q) < 0.05) {
        std::complex<double> iq(0.0, q);
        return 0.5 - iq / 3.0 - q * q / 8.0 + iq * q * q / 30.0 + q * q * q * q / 144.0;
    }
    std::complex<double> e = phase(q);
    return ((1.0 + std::complex<double>(0.0, q)) * e - 1.0) / (q * q);
}

Mollifier Mollifier::gaussian(double width) {
    if (!(width > 0.0)) throw std::invalid_argument("Mollifier::gaussian: width must be positive");
    Mollifier m;
    m.atoms_.push_back({false, width, 1.0});
    return m;
}

Mollifier Mollifier::bump(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Mollifier::bump: radius must be positive");
    Mollifier m;
    m.atoms_.push_back({true, radius, 1.0});
    return m;
}

Mollifier Mollifier::scaled(double c) const {
    Mollifier m = *this;
    for (auto& a : m.atoms_) a.coef *= c;
    return m;
}

Mollifier Mollifier::mixed_with(const Mollifier& other) const {
    Mollifier m = *this;
    m.atoms_.insert(m.atoms_.end(), other.atoms_.begin(), other.atoms_.end());
    return m;
}

double Mollifier::operator()(const FourVector& x) const {
    double acc = 0.0;
    for (const auto& a : atoms_) {
        if (a.is_bump) {
            double v = a.coef;
            for (int mu = 0; mu < 4; ++mu) v *= profile_1d(a, x[mu]);
            acc += v;
        } else {
            double w = a.param;
            double n = 2.0 * M_PI * w * w;
            acc += a.coef * std::exp(-euclid_norm_sq(x) / (2.0 * w * w)) / (n * n);
        }
    }
    return acc;
}

double Mollifier::hat(const FourVector& p) const {
    double acc = 0.0;
    for (const auto& a : atoms_) {
        if (a.is_bump) {
            double v = a.coef;
            for (int mu = 0; mu < 4; ++mu) v *= transform_1d(a, p[mu]);
            acc += v;
        } else {
            acc += a.coef * std::exp(-0.5 * a.param * a.param * euclid_norm_sq(p));
        }
    }
    return acc;
}

double Mollifier::integral() const {
    double acc = 0.0;
    for (const auto& a : atoms_) acc += a.coef;
    return acc;
}

double Mollifier::effective_radius() const {
    double r = 0.0;
    for (const auto& a : atoms_) r = std::max(r, a.is_bump ? 2.0 * a.param : 8.0 * a.param);
    return r;
}

FourVector eval_loop_function(const LoopSmearing& l, const FourVector& x, int panels, int order) {
    CompositeRule r = composite_rule_broken(l.loop.breakpoints(), panels, order);
    FourVector acc;
    for (std::size_t i = 0; i < r.node.size(); ++i) {
        double sv = l.s(x + l.loop.position(r.node[i]));
        if (sv == 0.0) continue;
        acc = acc + l.loop.tangent(r.node[i]) * (r.weight[i] * sv);
    }
    return acc * l.scale;
}

Mat4 eval_surface_function(const SurfaceSmearing& f, const FourVector& x, int panels, int order) {
    CompositeRule ru = composite_rule_broken(f.surface.u_breakpoints(), panels, order);
    CompositeRule rv = composite_rule(0.0, 1.0, panels, order);
    Mat4 acc{};
    for (std::size_t i = 0; i < ru.node.size(); ++i) {
        for (std::size_t j = 0; j < rv.node.size(); ++j) {
            double sv = f.s(x + f.surface.position(ru.node[i], rv.node[j]));
            if (sv == 0.0) continue;
            double wgt = ru.weight[i] * rv.weight[j] * sv;
            Mat4 jac = f.surface.jacobian(ru.node[i], rv.node[j]);
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = 0; nu < 4; ++nu) acc[mu][nu] += wgt * jac[mu][nu];
        }
    }
    double c = -0.5 * f.scale;
    for (auto& row : acc)
        for (auto& v : row) v *= c;
    return acc;
}

ParamLoop::Ball support_bound(const LoopSmearing& l) {
    ParamLoop::Ball b = l.loop.bounding_ball(512);
    b.center = -b.center;
    double pad = l.s.effective_radius();
    b.radius += pad;
    b.time_radius += pad;
    return b;
}

FourVector co_derivative_fd(const TwoFormSampler& f, const FourVector& x, double step) {
    FourVector out;
    for (int nu = 0; nu < 4; ++nu) {
        FourVector xp = x, xm = x;
        xp[nu] += step;
        xm[nu] -= step;
        Mat4 fp = f(xp), fm = f(xm);
        for (int mu = 0; mu < 4; ++mu) out[mu] -= (fp[nu][mu] - fm[nu][mu]) / step;
    }
    return out;
}

double co_derivative_one_form_fd(const OneFormSampler& h, const FourVector& x, double step) {
    double acc = 0.0;
    for (int nu = 0; nu < 4; ++nu) {
        FourVector xp = x, xm = x;
        xp[nu] += step;
        xm[nu] -= step;
        acc -= (h(xp)[nu] - h(xm)[nu]) / (2.0 * step);
    }
    return acc;
}

Mat4 curl_fd(const OneFormSampler& h, const FourVector& x, double step) {
    std::array<FourVector, 4> d;
    for (int nu = 0; nu < 4; ++nu) {
        FourVector xp = x, xm = x;
        xp[nu] += step;
        xm[nu] -= step;
        FourVector hp = h(xp), hm = h(xm);
        d[nu] = (hp - hm) * (1.0 / (2.0 * step));
    }
    Mat4 out{};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            out[mu][nu] = 0.5 * (metric_sign(nu) * d[nu][mu] - metric_sign(mu) * d[mu][nu]);
    return out;
}

TwoFormSampler translation_coprimitive(const OneFormSampler& h, const FourVector& y, int panels,
                                       int order) {
    CompositeRule r = composite_rule(0.0, 1.0, panels, order);
    return [h, y, r](const FourVector& x) {
        Mat4 out{};
        for (std::size_t i = 0; i < r.node.size(); ++i) {
            FourVector hv = h(x - y * r.node[i]);
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = 0; nu < 4; ++nu)
                    out[mu][nu] += r.weight[i] * (y[nu] * hv[mu] - y[mu] * hv[nu]);
        }
        for (auto& row : out)
            for (auto& v : row) v *= 0.5;
        return out;
    };
}

TwoFormSampler translation_coprimitive(const LoopSmearing& h, const FourVector& y, int panels,
                                       int order) {
    LoopSmearing copy = h;
    OneFormSampler sampler = [copy, panels, order](const FourVector& x) {
        return eval_loop_function(copy, x, panels, order);
    };
    return translation_coprimitive(sampler, y, panels, order);
}

TwoFormSampler loop_transport_coprimitive(const OneFormSampler& h, const ParamLoop& loop,
                                          int panels, int order) {
    CompositeRule r = composite_rule_broken(loop.breakpoints(), panels, order);
    std::vector<FourVector> pos, tan;
    pos.reserve(r.node.size());
    for (double u : r.node) {
        pos.push_back(loop.position(u));
        tan.push_back(loop.tangent(u));
    }
    return [h, r, pos, tan](const FourVector& x) {
        Mat4 out{};
        for (std::size_t i = 0; i < r.node.size(); ++i) {
            FourVector hv = h(x + pos[i]);
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = 0; nu < 4; ++nu)
                    out[mu][nu] += r.weight[i] * (hv[mu] * tan[i][nu] - hv[nu] * tan[i][mu]);
        }
        for (auto& row : out)
            for (auto& v : row) v *= 0.5;
        return out;
    };
}

OneFormSampler scalar_coprimitive(const Mollifier& s1, const Mollifier& s1hat, double kappa) {
    std::vector<Mollifier::Atom> atoms = s1.atoms();
    for (Mollifier::Atom a : s1hat.atoms()) {
        a.coef *= -kappa;
        atoms.push_back(a);
    }
    double total = 0.0;
    double width = 0.0;
    for (const auto& a : atoms) {
        total += a.coef;
        width = std::max(width, a.is_bump ? 0.5 * a.param : a.param);
    }
    if (std::abs(total) > 1e-10)
        throw std::invalid_argument("scalar_coprimitive: difference must have zero total integral");

    Mollifier::Atom chi{false, width, 1.0};
    return [atoms, chi](const FourVector& x) {
        FourVector h;
        for (int nu = 0; nu < 4; ++nu) {
            double head = 1.0;  // chi(x^0) ... chi(x^{nu-1})
            for (int i = 0; i < nu; ++i) head *= profile_1d(chi, x[i]);
            double acc = 0.0;
            for (const auto& a : atoms) {
                double v = cumulative_1d(a, x[nu]);
                if (nu < 3) v -= cumulative_1d(chi, x[nu]);
                for (int i = nu + 1; i < 4; ++i) v *= profile_1d(a, x[i]);
                acc += a.coef * v;
            }
            h[nu] = -head * acc;
        }
        return h;
    };
}

C4 fourier_loop(const LoopSmearing& l, const FourVector& p, int panels, int order) {
    CompositeRule r = composite_rule_broken(l.loop.breakpoints(), panels, order);
    C4 acc{};
    for (std::size_t i = 0; i < r.node.size(); ++i) {
        std::complex<double> ph =
            phase(minkowski_inner(p, l.loop.position(r.node[i]))) * r.weight[i];
        FourVector tan = l.loop.tangent(r.node[i]);
        for (int mu = 0; mu < 4; ++mu) acc[mu] += ph * tan[mu];
    }
    double c = l.scale * l.s.hat(p);
    for (auto& v : acc) v *= c;
    return acc;
}

CMat4 fourier_surface(const SurfaceSmearing& f, const FourVector& p, int panels, int order) {
    CompositeRule ru = composite_rule_broken(f.surface.u_breakpoints(), panels, order);
    CompositeRule rv = composite_rule(0.0, 1.0, panels, order);
    CMat4 acc{};
    for (std::size_t i = 0; i < ru.node.size(); ++i) {
        for (std::size_t j = 0; j < rv.node.size(); ++j) {
            std::complex<double> ph =
                phase(minkowski_inner(p, f.surface.position(ru.node[i], rv.node[j]))) *
                (ru.weight[i] * rv.weight[j]);
            Mat4 jac = f.surface.jacobian(ru.node[i], rv.node[j]);
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = mu + 1; nu < 4; ++nu) acc[mu][nu] += ph * jac[mu][nu];
        }
    }
    std::complex<double> c = -0.5 * f.scale * f.s.hat(p);
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
            acc[mu][nu] *= c;
            acc[nu][mu] = -acc[mu][nu];
        }
    return acc;
}

CMat4 fourier_loop_coprimitive(const LoopSmearing& l, const FourVector& apex, const FourVector& p,
                               int panels, int order) {
    CompositeRule r = composite_rule_broken(l.loop.breakpoints(), panels, order);
    CMat4 acc{};
    for (std::size_t i = 0; i < r.node.size(); ++i) {
        FourVector d = l.loop.position(r.node[i]) - apex;
        FourVector tan = l.loop.tangent(r.node[i]);
        std::complex<double> ph = cone_phi(minkowski_inner(p, d)) * r.weight[i];
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu + 1; nu < 4; ++nu) acc[mu][nu] += ph * (tan[mu] * d[nu] - tan[nu] * d[mu]);
    }
    std::complex<double> c =
        0.5 * l.scale * l.s.hat(p) * phase(minkowski_inner(p, apex));
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu) {
            acc[mu][nu] *= c;
            acc[nu][mu] = -acc[mu][nu];
        }
    return acc;
}

GridTransform grid_fourier(const ScalarSampler& g, const FourVector& p, const FourVector& lo,
                           const FourVector& hi, int n) {
    if (n < 2) throw std::invalid_argument("grid_fourier: need at least 2 cells per axis");
    FourVector h;
    double vol = 1.0;
    for (int mu = 0; mu < 4; ++mu) {
        h[mu] = (hi[mu] - lo[mu]) / double(n);
        if (!(h[mu] > 0.0)) throw std::invalid_argument("grid_fourier: empty box");
        vol *= h[mu];
    }
    GridTransform out;
    std::complex<double> acc{};
    FourVector x;
    for (int i0 = 0; i0 < n; ++i0) {
        x.t = lo.t + (i0 + 0.5) * h.t;
        for (int i1 = 0; i1 < n; ++i1) {
            x.x = lo.x + (i1 + 0.5) * h.x;
            for (int i2 = 0; i2 < n; ++i2) {
                x.y = lo.y + (i2 + 0.5) * h.y;
                for (int i3 = 0; i3 < n; ++i3) {
                    x.z = lo.z + (i3 + 0.5) * h.z;
                    double gv = g(x);
                    if (i0 == 0 || i0 == n - 1 || i1 == 0 || i1 == n - 1 || i2 == 0 ||
                        i2 == n - 1 || i3 == 0 || i3 == n - 1)
                        out.boundary_max = std::max(out.boundary_max, std::abs(gv));
                    if (gv != 0.0) acc += phase(-minkowski_inner(p, x)) * gv;
                }
            }
        }
    }
    out.value = acc * vol;
    return out;
}

}  // namespace linklab
