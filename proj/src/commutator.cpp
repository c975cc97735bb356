#include "linklab/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "linklab/quadrature.hpp"

namespace linklab {

namespace {

using cd = std::complex<double>;

cd phase_neg(double theta) { return {std::cos(theta), -std::sin(theta)}; }
cd phase_pos(double theta) { return {std::cos(theta), std::sin(theta)}; }

constexpr int kPairRow[6] = {0, 0, 0, 1, 1, 2};
constexpr int kPairCol[6] = {1, 2, 3, 2, 3, 3};

CMat4 assemble_antisym(const std::array<cd, 6>& six, cd head) {
    CMat4 out{};
    for (int k = 0; k < 6; ++k) {
        const cd v = head * six[k];
        out[kPairRow[k]][kPairCol[k]] = v;
        out[kPairCol[k]][kPairRow[k]] = -v;
    }
    return out;
}

double max_speed(const ParamLoop& loop) {
    double v = 0.0;
    for (int i = 0; i < 256; ++i) {
        const FourVector tan = loop.tangent((i + 0.5) / 256.0);
        v = std::max(v, 1.5 * std::abs(tan.t) + std::sqrt(spatial_norm_sq(tan)));
    }
    return v;
}

int auto_panels(const ParamLoop& loop, int panels, double k_max, int order) {
    if (panels > 0) return panels;
    const double nodes = k_max * max_speed(loop) / 2.5;
    return std::max(12, static_cast<int>(std::ceil(nodes / order)) + 2);
}

/// Quadrature nodes of a loop with the p-independent data precomputed.
struct ConeNodes {
    std::vector<FourVector> d;                   // gamma(u_i) - apex
    std::vector<std::array<double, 6>> bivec;    // wtan^mu d^nu - wtan^nu d^mu
    FourVector apex;
    Mollifier s;
    double half_scale = 0.0;
    bool wave = false;

    ConeNodes(const LoopSmearing& l, const FourVector& apex_in, int panels, int order)
        : apex(apex_in), s(l.s), half_scale(0.5 * l.scale) {
        const CompositeRule rule = composite_rule_broken(l.loop.breakpoints(), panels, order);
        d.reserve(rule.node.size());
        bivec.reserve(rule.node.size());
        for (std::size_t i = 0; i < rule.node.size(); ++i) {
            const FourVector pos = l.loop.position(rule.node[i]);
            const FourVector wt = rule.weight[i] * l.loop.tangent(rule.node[i]);
            const FourVector dd = pos - apex;
            d.push_back(dd);
            std::array<double, 6> b{};
            for (int k = 0; k < 6; ++k)
                b[k] = wt[kPairRow[k]] * dd[kPairCol[k]] - wt[kPairCol[k]] * dd[kPairRow[k]];
            bivec.push_back(b);
        }
    }

    CMat4 operator()(const FourVector& p) const {
        std::array<cd, 6> acc{};
        for (std::size_t i = 0; i < d.size(); ++i) {
            const cd ph = cone_phi(minkowski_inner(p, d[i]));
            for (int k = 0; k < 6; ++k) acc[k] += ph * bivec[i][k];
        }
        cd head = half_scale * s.hat(p) * phase_neg(minkowski_inner(p, apex));
        if (wave) head *= -minkowski_inner(p, p);
        return assemble_antisym(acc, head);
    }
};

/// Loop transform nodes for the curl smearing.
struct CurlNodes {
    std::vector<FourVector> pos;
    std::vector<FourVector> wtan;
    Mollifier s;
    double scale = 1.0;

    CurlNodes(const LoopSmearing& l, int panels, int order) : s(l.s), scale(l.scale) {
        const CompositeRule rule = composite_rule_broken(l.loop.breakpoints(), panels, order);
        pos.reserve(rule.node.size());
        wtan.reserve(rule.node.size());
        for (std::size_t i = 0; i < rule.node.size(); ++i) {
            pos.push_back(l.loop.position(rule.node[i]));
            wtan.push_back(rule.weight[i] * l.loop.tangent(rule.node[i]));
        }
    }

    CMat4 operator()(const FourVector& p) const {
        std::array<cd, 4> h{};
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const cd ph = phase_neg(minkowski_inner(p, pos[i]));
            for (int mu = 0; mu < 4; ++mu) h[mu] += ph * wtan[i][mu];
        }
        const double head = scale * s.hat(p);
        const cd half_i(0.0, 0.5);
        CMat4 out{};
        for (int k = 0; k < 6; ++k) {
            const int mu = kPairRow[k], nu = kPairCol[k];
            const cd v = half_i * head * (p[mu] * h[nu] - p[nu] * h[mu]);
            out[mu][nu] = v;
            out[nu][mu] = -v;
        }
        return out;
    }
};

struct SurfaceNodes {
    std::vector<FourVector> pos;
    std::vector<std::array<double, 6>> bivec;  // weight * jacobian
    Mollifier s;
    double neg_half_scale = 0.0;

    SurfaceNodes(const SurfaceSmearing& f, int panels, int order)
        : s(f.s), neg_half_scale(-0.5 * f.scale) {
        const CompositeRule ur = composite_rule_broken(f.surface.u_breakpoints(), panels, order);
        const CompositeRule vr = composite_rule(0.0, 1.0, panels, order);
        for (std::size_t i = 0; i < ur.node.size(); ++i)
            for (std::size_t j = 0; j < vr.node.size(); ++j) {
                const double u = ur.node[i], v = vr.node[j];
                const double w = ur.weight[i] * vr.weight[j];
                pos.push_back(f.surface.position(u, v));
                const Mat4 jac = f.surface.jacobian(u, v);
                std::array<double, 6> b{};
                for (int k = 0; k < 6; ++k) b[k] = w * jac[kPairRow[k]][kPairCol[k]];
                bivec.push_back(b);
            }
    }

    CMat4 operator()(const FourVector& p) const {
        std::array<cd, 6> acc{};
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const cd ph = phase_neg(minkowski_inner(p, pos[i]));
            for (int k = 0; k < 6; ++k) acc[k] += ph * bivec[i][k];
        }
        return assemble_antisym(acc, neg_half_scale * s.hat(p));
    }
};

int parity_of(int a, int b, int c, int d) {
    const int v[4] = {a, b, c, d};
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (v[i] > v[j]) ++inv;
    return inv % 2 ? -1 : 1;
}

/// eps^{rho mu nu lambda} (all indices up, eps^{0123} = +1).
double eps_up4(int a, int b, int c, int d) {
    if (a == b || a == c || a == d || b == c || b == d || c == d) return 0.0;
    return parity_of(a, b, c, d);
}

struct PairingResult {
    cd value;
    double l1 = 0.0;
    double tail = 0.0;
};

enum class PairingMode { commutator_fast, commutator_both, positive };

PairingResult eval_pairing(const FieldPairModel& model, const TwoFormSmearing& f,
                           const TwoFormSmearing& g, const ShellGrid& grid, PairingMode mode,
                           int workers) {
    PairingResult out{};
    const double norm = std::pow(2.0 * M_PI, -3);
    for (const auto& comp : model.components) {
        auto X = [&](const FourVector& p) { return q_contract(comp.ts, p, f.hat(-p), g.hat(p)); };
        const ShellBranches branches = mode == PairingMode::commutator_both
                                           ? ShellBranches::both
                                           : ShellBranches::positive;
        for (const auto& pt : comp.mass.points) {
            const ShellSum s = shell_sum(X, pt.m, grid, branches, workers);
            cd v = s.value;
            double l1 = s.l1;
            if (mode == PairingMode::commutator_fast) {
                v = cd(0.0, 2.0 * s.value.imag());
                l1 *= 2.0;
            }
            out.value += pt.weight * norm * v;
            out.l1 += std::abs(pt.weight) * norm * l1;
            out.tail = std::max(out.tail, s.tail_ratio);
        }
    }
    return out;
}

/// Cancellation-free magnitude of the pairing: the transform norms against the
/// kernel's quadratic momentum growth.  Serves as the yardstick that decides
/// whether a small commutator value is a genuine zero or an unresolved grid.
double eval_scale(const FieldPairModel& model, const TwoFormSmearing& f, const TwoFormSmearing& g,
                  const ShellGrid& grid, int workers) {
    double out = 0.0;
    const double norm = std::pow(2.0 * M_PI, -3);
    for (const auto& comp : model.components) {
        const double coef = 4.0 * (std::abs(comp.ts.c1) + 2.0 * std::abs(comp.ts.c2));
        auto X = [&](const FourVector& p) {
            const CMat4 a = f.hat(-p);
            const CMat4 b = g.hat(p);
            double na = 0.0, nb = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    na += std::norm(a[i][j]);
                    nb += std::norm(b[i][j]);
                }
            const double pe = p.t * p.t + p.x * p.x + p.y * p.y + p.z * p.z;
            return cd(coef * pe * std::sqrt(na * nb), 0.0);
        };
        for (const auto& pt : comp.mass.points)
            out += 2.0 * std::abs(pt.weight) * norm *
                   shell_sum(X, pt.m, grid, ShellBranches::positive, workers).value.real();
    }
    return out;
}

CommutatorReport two_level_report(const FieldPairModel& model, const TwoFormSmearing& f,
                                  const TwoFormSmearing& g, const ShellGrid& grid,
                                  PairingMode mode, int workers) {
    validate_model(model);
    grid.validate();
    const PairingResult fine = eval_pairing(model, f, g, grid, mode, workers);
    if (fine.tail > 1e-3)
        throw std::domain_error("commutator: integrand has not decayed within the radial range");
    const ShellGrid coarse_grid = grid.scaled(0.625);
    const PairingResult coarse = eval_pairing(model, f, g, coarse_grid, mode, workers);

    CommutatorReport rep;
    rep.value = fine.value;
    rep.error_estimate = std::abs(fine.value - coarse.value);
    rep.l1_scale = eval_scale(model, f, g, coarse_grid, workers);
    rep.grid = grid;
    rep.inputs = f.label + " | " + g.label;

    const double vmax = std::max(std::abs(fine.value), std::abs(coarse.value));
    if (rep.error_estimate > 0.5 * vmax && vmax > 1e-5 * rep.l1_scale)
        throw GridUnresolved("commutator: refinement levels disagree on " + rep.inputs);
    return rep;
}

FourVector apex_offset(double shift) { return FourVector{0.0, 0.76, -0.51, 0.4} * shift; }

struct IntrinsicSetup {
    LoopSmearing l1, l2;
    FourVector apex1, apex2;
    int panels1 = 0, panels2 = 0;
};

IntrinsicSetup intrinsic_setup(const Mollifier& s1, const ParamLoop& loop1, const Mollifier& s2,
                               const ParamLoop& loop2, const ShellGrid& grid,
                               const IntrinsicOptions& opt) {
    if (!is_spatial(loop1) || !is_spatial(loop2))
        throw std::domain_error("intrinsic_commutator: loops must be spatial");
    const double margin = std::max(s1.effective_radius(), s2.effective_radius());
    if (!is_spacelike_separated(loop1, loop2, 512, margin))
        throw std::domain_error(
            "intrinsic_commutator: loops must be spacelike separated with margin exceeding the "
            "mollifier radii");
    IntrinsicSetup s;
    s.l1 = {s1, loop1, 1.0};
    s.l2 = {s2, loop2, 1.0};
    s.apex1 = loop1.centroid();
    s.apex2 = loop2.centroid();
    s.panels1 = auto_panels(loop1, opt.loop_panels, grid.k_max(), opt.loop_order);
    s.panels2 = auto_panels(loop2, opt.loop_panels, grid.k_max(), opt.loop_order);
    return s;
}

}  // namespace

TwoFormSmearing cone_smearing(const LoopSmearing& l, const FourVector& apex, int panels,
                              double k_max, int order) {
    auto nodes = std::make_shared<ConeNodes>(l, apex, auto_panels(l.loop, panels, k_max, order),
                                             order);
    return {[nodes](const FourVector& p) { return (*nodes)(p); }, "cone"};
}

TwoFormSmearing curl_smearing(const LoopSmearing& l, int panels, double k_max, int order) {
    auto nodes = std::make_shared<CurlNodes>(l, auto_panels(l.loop, panels, k_max, order), order);
    return {[nodes](const FourVector& p) { return (*nodes)(p); }, "curl"};
}

TwoFormSmearing dalembert_cone_smearing(const LoopSmearing& l, const FourVector& apex, int panels,
                                        double k_max, int order) {
    auto nodes = std::make_shared<ConeNodes>(l, apex, auto_panels(l.loop, panels, k_max, order),
                                             order);
    nodes->wave = true;
    return {[nodes](const FourVector& p) { return (*nodes)(p); }, "wave-cone"};
}

TwoFormSmearing envelope_smearing(const Mat4& m, const FourVector& center, double width) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::abs(m[i][j] + m[j][i]) > 1e-12)
                throw std::invalid_argument("envelope_smearing: matrix must be antisymmetric");
    const Mollifier s = Mollifier::gaussian(width);
    return {[m, center, s](const FourVector& p) {
                const cd head = s.hat(p) * phase_pos(minkowski_inner(p, center));
                CMat4 out{};
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) out[i][j] = head * m[i][j];
                return out;
            },
            "envelope"};
}

std::function<Ten3(const FourVector&)> gaussian_three_form(const FourVector& b,
                                                           const FourVector& center, double width) {
    const FourVector bl = lower_index(b);
    const Mollifier s = Mollifier::gaussian(width);
    Ten3 r{};
    for (int rho = 0; rho < 4; ++rho)
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                double acc = 0.0;
                for (int lam = 0; lam < 4; ++lam) acc += eps_up4(rho, mu, nu, lam) * bl[lam];
                r[rho][mu][nu] = acc;
            }
    return [r, s, center](const FourVector& x) {
        const double val = s(x - center);
        Ten3 out = r;
        for (auto& plane : out)
            for (auto& row : plane)
                for (auto& entry : row) entry *= val;
        return out;
    };
}

TwoFormSmearing divergence_smearing(const FourVector& b, const FourVector& center, double width) {
    const FourVector bl = lower_index(b);
    const Mollifier s = Mollifier::gaussian(width);
    Ten3 r{};
    for (int rho = 0; rho < 4; ++rho)
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
                double acc = 0.0;
                for (int lam = 0; lam < 4; ++lam) acc += eps_up4(rho, mu, nu, lam) * bl[lam];
                r[rho][mu][nu] = acc;
            }
    return {[r, s, center](const FourVector& p) {
                const FourVector pl = lower_index(p);
                const cd head = cd(0.0, -1.0) * s.hat(p) * phase_pos(minkowski_inner(p, center));
                CMat4 out{};
                for (int mu = 0; mu < 4; ++mu)
                    for (int nu = 0; nu < 4; ++nu) {
                        double acc = 0.0;
                        for (int rho = 0; rho < 4; ++rho) acc += pl[rho] * r[rho][mu][nu];
                        out[mu][nu] = head * acc;
                    }
                return out;
            },
            "divergence"};
}

TwoFormSmearing surface_smearing(const SurfaceSmearing& f, int panels, int order) {
    auto nodes = std::make_shared<SurfaceNodes>(f, panels, order);
    return {[nodes](const FourVector& p) { return (*nodes)(p); }, "surface"};
}

TwoFormSmearing dual_smearing(const TwoFormSmearing& f) {
    auto hat = f.hat;
    return {[hat](const FourVector& p) { return hodge_dual(hat(p), 1e-7); }, "dual " + f.label};
}

CommutatorReport smeared_field_commutator(const FieldPairModel& model, const TwoFormSmearing& f,
                                          const TwoFormSmearing& g, const ShellGrid& grid,
                                          int workers, bool assume_real) {
    return two_level_report(model, f, g, grid,
                            assume_real ? PairingMode::commutator_fast
                                        : PairingMode::commutator_both,
                            workers);
}

CommutatorReport two_point_function(const FieldPairModel& model, const TwoFormSmearing& f,
                                    const TwoFormSmearing& g, const ShellGrid& grid, int workers) {
    return two_level_report(model, f, g, grid, PairingMode::positive, workers);
}

CommutatorReport intrinsic_commutator(const FieldPairModel& model, const Mollifier& s1,
                                      const ParamLoop& loop1, const Mollifier& s2,
                                      const ParamLoop& loop2, const ShellGrid& grid,
                                      const IntrinsicOptions& opt) {
    validate_model(model);
    grid.validate();
    const IntrinsicSetup setup = intrinsic_setup(s1, loop1, s2, loop2, grid, opt);
    const PairingMode mode =
        opt.both_branches ? PairingMode::commutator_both : PairingMode::commutator_fast;

    const TwoFormSmearing f =
        cone_smearing(setup.l1, setup.apex1, setup.panels1, grid.k_max(), opt.loop_order);
    const TwoFormSmearing g =
        cone_smearing(setup.l2, setup.apex2, setup.panels2, grid.k_max(), opt.loop_order);

    const PairingResult fine = eval_pairing(model, f, g, grid, mode, opt.workers);
    if (fine.tail > 1e-3)
        throw std::domain_error("intrinsic_commutator: integrand has not decayed in the radial range");
    const ShellGrid coarse_grid = grid.scaled(0.625);
    const PairingResult coarse = eval_pairing(model, f, g, coarse_grid, mode, opt.workers);

    const FourVector off = apex_offset(opt.apex_shift);
    const TwoFormSmearing f2 =
        cone_smearing(setup.l1, setup.apex1 + off, setup.panels1, grid.k_max(), opt.loop_order);
    const TwoFormSmearing g2 =
        cone_smearing(setup.l2, setup.apex2 - off, setup.panels2, grid.k_max(), opt.loop_order);
    const PairingResult shifted = eval_pairing(model, f2, g2, coarse_grid, mode, opt.workers);

    CommutatorReport rep;
    rep.value = fine.value;
    rep.error_estimate = std::max(std::abs(fine.value - coarse.value),
                                  std::abs(coarse.value - shifted.value));
    rep.l1_scale = eval_scale(model, f, g, coarse_grid, opt.workers);
    rep.grid = grid;
    rep.inputs = "intrinsic potentials on cone co-primitives";

    const double vmax = std::max(std::abs(fine.value), std::abs(coarse.value));
    if (std::abs(fine.value - coarse.value) > 0.5 * vmax && vmax > 1e-5 * rep.l1_scale)
        throw GridUnresolved("intrinsic_commutator: refinement levels disagree");
    return rep;
}

LinkedPair reference_link_pair() { return make_torus_link_pair(1); }

ZReport extract_Z(const FieldPairModel& model, const Mollifier& s, const ShellGrid& grid,
                  int workers) {
    const LinkedPair pair = reference_link_pair();
    IntrinsicOptions opt;
    opt.workers = workers;
    opt.both_branches = true;
    ZReport out;
    out.raw = intrinsic_commutator(model, s, pair.first, s, pair.second, grid, opt);
    const cd z = cd(0.0, -1.0) * out.raw.value;
    out.z = z.real();
    out.imag_residual = std::abs(z.imag());
    out.error = out.raw.error_estimate;
    return out;
}

ProportionalityReport verify_linking_proportionality(const FieldPairModel& model,
                                                     const Mollifier& s,
                                                     const std::vector<int>& lambdas,
                                                     const ShellGrid& grid, int workers) {
    ProportionalityReport out;
    out.z = extract_Z(model, s, grid, workers);
    if (out.z.z == 0.0) throw std::domain_error("verify_linking_proportionality: Z vanished");
    IntrinsicOptions opt;
    opt.workers = workers;
    for (int lambda : lambdas) {
        const LinkedPair pair = make_torus_link_pair(lambda);
        const CommutatorReport rep =
            intrinsic_commutator(model, s, pair.first, s, pair.second, grid, opt);
        ProportionalityRow row;
        row.lambda = lambda;
        row.value = rep.value;
        row.ratio = rep.value.imag() / out.z.z;
        row.error = (rep.error_estimate + std::abs(row.ratio) * out.z.error) / std::abs(out.z.z);
        out.rows.push_back(row);
    }
    return out;
}

std::vector<ScalingRow> normalization_scaling_check(const FieldPairModel& model,
                                                    const std::vector<double>& kappas,
                                                    double w_base, double w_alt,
                                                    const ShellGrid& grid, int workers) {
    const LinkedPair pair = reference_link_pair();
    IntrinsicOptions opt;
    opt.workers = workers;
    const Mollifier base = Mollifier::gaussian(w_base);
    const CommutatorReport ref =
        intrinsic_commutator(model, base, pair.first, base, pair.second, grid, opt);

    std::vector<ScalingRow> rows;
    for (double kappa : kappas) {
        const Mollifier s1 =
            kappa == 0.0
                ? Mollifier::gaussian(w_alt).mixed_with(Mollifier::gaussian(w_base).scaled(-1.0))
                : Mollifier::gaussian(w_alt).scaled(kappa);
        const CommutatorReport rep =
            intrinsic_commutator(model, s1, pair.first, base, pair.second, grid, opt);
        ScalingRow row;
        row.kappa = kappa;
        row.value = rep.value;
        row.expected = kappa * ref.value;
        row.deviation = std::abs(row.value - row.expected);
        rows.push_back(row);
    }
    return rows;
}

std::vector<MassRow> mass_gap_sweep(const std::vector<double>& masses, const Mollifier& s,
                                    const ShellGrid& grid, int workers) {
    const LinkedPair pair = reference_link_pair();
    IntrinsicOptions opt;
    opt.workers = workers;
    std::vector<MassRow> rows;
    for (double m : masses) {
        const FieldPairModel model =
            m == 0.0 ? massless_model(0.0, 1.0) : massive_atom_model(m, 1.0, 1.0);
        const CommutatorReport rep =
            intrinsic_commutator(model, s, pair.first, s, pair.second, grid, opt);
        rows.push_back({m, rep.value, rep.error_estimate, rep.l1_scale});
    }
    return rows;
}

PositivityReport check_wightman_positivity(const FieldPairModel& model_f,
                                           const FieldPairModel& model_g,
                                           const FieldPairModel& model_cross, int trials,
                                           const ShellGrid& grid, std::uint32_t seed,
                                           int workers) {
    if (trials < 1) throw std::invalid_argument("check_wightman_positivity: trials must be >= 1");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(-0.5, 0.5);
    std::uniform_real_distribution<double> wid(0.25, 0.5);

    auto random_envelope = [&]() {
        Mat4 m{};
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                m[i][j] = entry(rng);
                m[j][i] = -m[i][j];
            }
        const FourVector c{pos(rng), pos(rng), pos(rng), pos(rng)};
        return envelope_smearing(m, c, wid(rng));
    };

    PositivityReport out;
    out.trials = trials;
    out.worst_margin = 1.0;
    out.worst_self = 1.0;
    for (int t = 0; t < trials; ++t) {
        const TwoFormSmearing f = random_envelope();
        const TwoFormSmearing g = random_envelope();
        const CommutatorReport aa = two_point_function(model_f, f, f, grid, workers);
        const CommutatorReport bb = two_point_function(model_g, g, g, grid, workers);
        const CommutatorReport ab = two_point_function(model_cross, f, g, grid, workers);
        const double a = aa.value.real();
        const double b = bb.value.real();
        const double c2 = std::norm(ab.value);
        const double margin = (a * b - c2) / (a * b + c2 + 1e-300);
        out.worst_margin = std::min(out.worst_margin, margin);
        out.worst_self = std::min({out.worst_self, a / std::max(aa.l1_scale, 1e-300),
                                   b / std::max(bb.l1_scale, 1e-300)});
    }
    out.passed = out.worst_margin >= -1e-4 && out.worst_self >= -1e-12;
    return out;
}

DalembertReport dalembert_curl_identity_check(const FieldPairModel& model, const Mollifier& s1,
                                              const ParamLoop& loop1, const Mollifier& s2,
                                              const ParamLoop& loop2, const ShellGrid& grid,
                                              int workers) {
    const double k_max = grid.k_max();
    const LoopSmearing l1{s1, loop1, 1.0}, l2{s2, loop2, 1.0};
    const TwoFormSmearing cone1 = cone_smearing(l1, loop1.centroid(), 0, k_max);
    const TwoFormSmearing cone2 = cone_smearing(l2, loop2.centroid(), 0, k_max);
    const TwoFormSmearing wave1 = dalembert_cone_smearing(l1, loop1.centroid(), 0, k_max);
    const TwoFormSmearing wave2 = dalembert_cone_smearing(l2, loop2.centroid(), 0, k_max);
    const TwoFormSmearing curl1 = curl_smearing(l1, 0, k_max);
    const TwoFormSmearing curl2 = curl_smearing(l2, 0, k_max);

    DalembertReport rep;
    rep.wave_first = smeared_field_commutator(model, wave1, cone2, grid, workers).value;
    rep.curl_first = smeared_field_commutator(model, curl1, cone2, grid, workers).value;
    rep.wave_second = smeared_field_commutator(model, cone1, wave2, grid, workers).value;
    rep.curl_second = smeared_field_commutator(model, cone1, curl2, grid, workers).value;
    rep.err_first = std::abs(rep.wave_first - rep.curl_first);
    rep.err_second = std::abs(rep.wave_second - rep.curl_second);
    return rep;
}

}  // namespace linklab
