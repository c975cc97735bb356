#include "linklab/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "linklab/quadrature.hpp"

namespace linklab {

namespace {

int perm_parity(int a, int b, int c, int d) {
    const int v[4] = {a, b, c, d};
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (v[i] > v[j]) ++inv;
    return (inv % 2 == 0) ? 1 : -1;
}

struct EpsEntry {
    int a, b, c, d;
    double low;   // eps_{abcd}
    double up2;   // eps^{ab}_{cd}
};

/// The 24 nonzero entries of the alternating symbol, eps_{0123} = -1
/// (so that eps with raised indices has eps^{0123} = +1).
const std::vector<EpsEntry>& eps_entries() {
    static const std::vector<EpsEntry> table = [] {
        std::vector<EpsEntry> out;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d) {
                        if (a == b || a == c || a == d || b == c || b == d || c == d) continue;
                        const double low = -perm_parity(a, b, c, d);
                        out.push_back({a, b, c, d, low, metric_sign(a) * metric_sign(b) * low});
                    }
        return out;
    }();
    return table;
}

double eps_up2(int a, int b, int c, int d) {
    if (a == b || a == c || a == d || b == c || b == d || c == d) return 0.0;
    return metric_sign(a) * metric_sign(b) * -perm_parity(a, b, c, d);
}

double metric(int mu, int nu) { return mu == nu ? metric_sign(mu) : 0.0; }

/// The shared index structure of both kernel lines:
///   S_{mu nu rho sigma} = p_mu p_rho g_{nu sigma} - p_nu p_rho g_{mu sigma}
///                       - p_mu p_sigma g_{nu rho} + p_nu p_sigma g_{mu rho}
double s_line(const FourVector& pl, int mu, int nu, int rho, int sigma) {
    return pl[mu] * pl[rho] * metric(nu, sigma) - pl[nu] * pl[rho] * metric(mu, sigma) -
           pl[mu] * pl[sigma] * metric(nu, rho) + pl[nu] * pl[sigma] * metric(mu, rho);
}

template <typename M>
void require_antisymmetric(const M& f, double tol) {
    double scale = 0.0, worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            scale = std::max(scale, std::abs(f[i][j]));
            worst = std::max(worst, std::abs(f[i][j] + f[j][i]));
        }
    if (worst > tol * std::max(scale, 1.0))
        throw std::invalid_argument("hodge_dual: input is not antisymmetric");
}

template <typename M>
M hodge_dual_impl(const M& f, double tol) {
    require_antisymmetric(f, tol);
    M out{};
    for (const auto& e : eps_entries()) out[e.a][e.b] += 0.5 * e.up2 * f[e.c][e.d];
    return out;
}

}  // namespace

MassComponent MassComponent::atom(double m, double weight) {
    MassComponent out;
    out.points.push_back({m, weight});
    return out;
}

MassComponent MassComponent::continuum(double m_lo, double m_hi,
                                       const std::function<double(double)>& density, int nodes) {
    if (!(m_lo >= 0.0) || !(m_hi > m_lo)) throw std::invalid_argument("continuum: bad mass range");
    if (nodes < 1) throw std::invalid_argument("continuum: need at least one node");
    const GaussRule& rule = gauss_rule(nodes);
    const double mid = 0.5 * (m_lo + m_hi), half = 0.5 * (m_hi - m_lo);
    MassComponent out;
    for (int i = 0; i < nodes; ++i) {
        const double m = mid + half * rule.node[i];
        out.points.push_back({m, half * rule.weight[i] * density(m)});
    }
    return out;
}

double MassComponent::total_weight() const {
    double acc = 0.0;
    for (const auto& p : points) acc += p.weight;
    return acc;
}

double MassComponent::max_mass() const {
    double m = 0.0;
    for (const auto& p : points) m = std::max(m, p.m);
    return m;
}

FieldPairModel massless_model(double c1, double c2, double weight) {
    return {{{MassComponent::atom(0.0, weight), {c1, c2}}}};
}

FieldPairModel massive_atom_model(double m, double weight, double c1) {
    return {{{MassComponent::atom(m, weight), {c1, 0.0}}}};
}

void validate_model(const FieldPairModel& model) {
    if (model.components.empty()) throw std::invalid_argument("model has no components");
    for (const auto& comp : model.components) {
        if (comp.mass.points.empty()) throw std::invalid_argument("model component has no mass points");
        for (const auto& pt : comp.mass.points) {
            if (!(pt.m >= 0.0)) throw std::invalid_argument("model mass must be nonnegative");
            if (!std::isfinite(pt.weight)) throw std::invalid_argument("model weight must be finite");
            if (comp.ts.c2 != 0.0 && pt.m > 0.0)
                throw std::invalid_argument(
                    "dual kernel line requires massless support; massive components carry c1 only");
        }
        if (!std::isfinite(comp.ts.c1) || !std::isfinite(comp.ts.c2))
            throw std::invalid_argument("model coefficients must be finite");
    }
}

double ShellGrid::k_max() const { return radial_scale * std::expm1(3.0); }

int ShellGrid::eff_radial() const { return radial_nodes << refinement; }
int ShellGrid::eff_polar() const { return polar_nodes << refinement; }
int ShellGrid::eff_azimuthal() const { return azimuthal_nodes << refinement; }

ShellGrid ShellGrid::scaled(double factor) const {
    auto shrink = [factor](int n) {
        return std::max(4, static_cast<int>(std::ceil(n * factor)));
    };
    ShellGrid out = *this;
    out.radial_nodes = shrink(eff_radial());
    out.polar_nodes = shrink(eff_polar());
    out.azimuthal_nodes = shrink(eff_azimuthal()) & ~1;
    out.refinement = 0;
    return out;
}

void ShellGrid::validate() const {
    if (radial_nodes < 4 || polar_nodes < 4 || azimuthal_nodes < 4)
        throw std::invalid_argument("shell grid needs at least 4 nodes per direction");
    if (!(radial_scale > 0.0) || !std::isfinite(radial_scale))
        throw std::invalid_argument("shell grid radial scale must be positive");
    if (refinement < 0 || refinement > 12)
        throw std::invalid_argument("shell grid refinement out of range");
}

ShellGrid suggest_shell_grid(double min_width, double extent, double transverse) {
    if (!(min_width > 0.0) || !(extent > 0.0))
        throw std::invalid_argument("suggest_shell_grid: width and extent must be positive");
    const double k_max = 3.0 / min_width;
    const double phase = k_max * extent;
    auto even = [](int n) { return n + (n & 1); };
    ShellGrid g;
    g.radial_scale = k_max / std::expm1(3.0);
    g.radial_nodes = even(static_cast<int>(std::ceil(0.95 * phase)) + 32);
    g.polar_nodes = even(static_cast<int>(std::ceil(0.80 * phase)) + 16);
    g.azimuthal_nodes = even(static_cast<int>(std::ceil(1.4 * k_max * std::max(transverse, 0.1))) + 24);
    return g;
}

Rank4 q_tensor(const FourVector& p, const TensorStructure& ts) {
    const FourVector pl = lower_index(p);
    Rank4 q{};
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
            for (int rho = 0; rho < 4; ++rho)
                for (int sigma = 0; sigma < 4; ++sigma) {
                    double val = ts.c1 * s_line(pl, mu, nu, rho, sigma);
                    if (ts.c2 != 0.0)
                        for (int tau = 0; tau < 4; ++tau)
                            for (int ups = 0; ups < 4; ++ups) {
                                const double e = eps_up2(tau, ups, rho, sigma);
                                if (e != 0.0) val += ts.c2 * s_line(pl, mu, nu, tau, ups) * e;
                            }
                    q[mu][nu][rho][sigma] = val;
                }
    return q;
}

Mat4 hodge_dual(const Mat4& f, double tol) { return hodge_dual_impl(f, tol); }
CMat4 hodge_dual(const CMat4& f, double tol) { return hodge_dual_impl(f, tol); }

std::complex<double> q_contract(const TensorStructure& ts, const FourVector& p, const CMat4& a,
                                const CMat4& b) {
    using cd = std::complex<double>;
    const FourVector pl = lower_index(p);
    std::array<cd, 4> u{}, v{};
    for (int nu = 0; nu < 4; ++nu)
        for (int mu = 0; mu < 4; ++mu) {
            u[nu] += pl[mu] * a[mu][nu];
            v[nu] += pl[mu] * b[mu][nu];
        }
    cd out = 0.0;
    if (ts.c1 != 0.0) {
        cd inner = 0.0;
        for (int nu = 0; nu < 4; ++nu) inner += metric_sign(nu) * u[nu] * v[nu];
        out += 4.0 * ts.c1 * inner;
    }
    if (ts.c2 != 0.0) {
        cd acc = 0.0;
        for (const auto& e : eps_entries())
            acc += pl[e.a] * metric_sign(e.b) * u[e.b] * e.up2 * b[e.c][e.d];
        out += 4.0 * ts.c2 * acc;
    }
    return out;
}

ShellSum shell_sum(const std::function<std::complex<double>(const FourVector&)>& X, double m,
                   const ShellGrid& grid, ShellBranches branches, int workers) {
    grid.validate();
    if (!(m >= 0.0)) throw std::invalid_argument("shell_sum: mass must be nonnegative");

    const int nr = grid.eff_radial();
    const int nth = grid.eff_polar();
    const int nph = grid.eff_azimuthal();
    const double scale = grid.radial_scale;

    const CompositeRule radial = composite_rule(0.0, 1.0, std::max(1, nr / 8), 8);
    const CompositeRule polar = composite_rule(-1.0, 1.0, std::max(1, nth / 8), 8);

    std::vector<double> cphi(nph), sphi(nph);
    const double wphi = 2.0 * M_PI / nph;
    for (int j = 0; j < nph; ++j) {
        cphi[j] = std::cos(wphi * j);
        sphi[j] = std::sin(wphi * j);
    }

    const std::size_t slices = radial.node.size();
    std::vector<std::complex<double>> partial(slices);
    std::vector<double> mass(slices);
    std::vector<double> magnitude(slices);

    parallel_for(slices, workers, [&](std::size_t i) {
        const double t = radial.node[i];
        const double k = scale * std::expm1(3.0 * t);
        const double jac = 3.0 * (k + scale);
        const double omega = std::sqrt(k * k + m * m);
        const double radial_factor = radial.weight[i] * jac * k * k / (2.0 * omega);

        std::complex<double> acc = 0.0;
        double acc_abs = 0.0;
        double peak = 0.0;
        for (std::size_t a = 0; a < polar.node.size(); ++a) {
            const double c = polar.node[a];
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            std::complex<double> ring = 0.0;
            double ring_abs = 0.0;
            for (int j = 0; j < nph; ++j) {
                const FourVector kvec{0.0, k * s * cphi[j], k * s * sphi[j], k * c};
                std::complex<double> val = X({omega, kvec.x, kvec.y, kvec.z});
                double mag = std::abs(val);
                if (branches == ShellBranches::both) {
                    const std::complex<double> lower = X({-omega, kvec.x, kvec.y, kvec.z});
                    val -= lower;
                    mag += std::abs(lower);
                }
                ring += val;
                ring_abs += mag;
                peak = std::max(peak, std::abs(val));
            }
            acc += polar.weight[a] * ring;
            acc_abs += polar.weight[a] * ring_abs;
        }
        partial[i] = radial_factor * wphi * acc;
        mass[i] = radial_factor * wphi * acc_abs;
        magnitude[i] = std::abs(radial_factor) * peak;
    });

    ShellSum out;
    out.value = 0.0;
    double mag_max = 0.0;
    for (std::size_t i = 0; i < slices; ++i) {
        out.value += partial[i];
        out.l1 += mass[i];
        mag_max = std::max(mag_max, magnitude[i]);
    }
    out.tail_ratio = mag_max > 0.0 ? magnitude[slices - 1] / mag_max : 0.0;
    return out;
}

ReducedIntegral mass_shell_reduce(const std::function<std::complex<double>(const FourVector&)>& X,
                                  double m, const ShellGrid& grid, int workers) {
    const ShellSum full = shell_sum(X, m, grid, ShellBranches::both, workers);
    if (full.tail_ratio > 1e-3)
        throw std::domain_error("mass_shell_reduce: integrand has not decayed within the radial range");
    const ShellSum coarse = shell_sum(X, m, grid.scaled(0.625), ShellBranches::both, workers);
    return {full.value, std::abs(full.value - coarse.value)};
}

TwoFormSampler three_form_divergence(const std::function<Ten3(const FourVector&)>& t, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("three_form_divergence: step must be positive");
    return [t, step](const FourVector& x) {
        Mat4 out{};
        for (int rho = 0; rho < 4; ++rho) {
            FourVector xp = x, xm = x;
            xp[rho] += step;
            xm[rho] -= step;
            const Ten3 tp = t(xp), tm = t(xm);
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = 0; nu < 4; ++nu)
                    out[mu][nu] += (tp[rho][mu][nu] - tm[rho][mu][nu]) / (2.0 * step);
        }
        return out;
    };
}

}  // namespace linklab
