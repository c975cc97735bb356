#pragma once

/// \file spectral.hpp
/// Spectral data for pairs of closed two-form fields with c-number
/// commutators: the rank-4 momentum kernel, mass measures, Hodge duality,
/// and reduction of four-dimensional spectral integrals to the mass shell.
///
/// The kernel assembled by q_tensor is
///   Q_{mu nu rho sigma}(p) =
///       c1 (p_mu p_rho g_{nu sigma} - p_nu p_rho g_{mu sigma}
///           - p_mu p_sigma g_{nu rho} + p_nu p_sigma g_{mu rho})
///     + c2 (same structure on (mu nu tau upsilon)) eps^{tau upsilon}_{rho sigma}
/// with eps^{0123} = +1 and indices lowered by the metric (eps_{0123} = -1).
/// The c1 line is the self-pairing structure familiar from the free
/// electromagnetic field; the c2 line pairs a field with a Hodge dual and is
/// admissible only on the massless shell, which model validation enforces.

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "linklab/geometry.hpp"
#include "linklab/smearing.hpp"

namespace linklab {

using Rank4 = std::array<std::array<Mat4, 4>, 4>;  // [mu][nu][rho][sigma]
using Ten3 = std::array<Mat4, 4>;                  // [rho][mu][nu]

/// Raised when two-level grid refinement disagrees so strongly that the
/// reported value cannot be trusted.
struct GridUnresolved : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coefficients of the two admissible kernel lines.
struct TensorStructure {
    double c1 = 0.0;
    double c2 = 0.0;
};

/// Mass measure of one spectral component: an atom or a discretized
/// continuum. Continuum densities may be signed for commutator studies;
/// positivity-sensitive callers must keep them nonnegative.
struct MassComponent {
    struct Point {
        double m = 0.0;
        double weight = 0.0;
    };
    std::vector<Point> points;

    static MassComponent atom(double m, double weight);
    static MassComponent continuum(double m_lo, double m_hi,
                                   const std::function<double(double)>& density, int nodes);

    double total_weight() const;
    double max_mass() const;
};

/// Commutation data of a field pair: a sum of (mass measure, kernel
/// coefficients) components.
struct FieldPairModel {
    struct Component {
        MassComponent mass;
        TensorStructure ts;
    };
    std::vector<Component> components;
};

/// Single-component helpers.
FieldPairModel massless_model(double c1, double c2, double weight = 1.0);
FieldPairModel massive_atom_model(double m, double weight = 1.0, double c1 = 1.0);

/// Throws std::invalid_argument on: empty model, negative mass, nonfinite
/// weight, or a c2 coefficient attached to positive-mass support (the dual
/// pairing is only admissible at m = 0).
void validate_model(const FieldPairModel& model);

/// Product quadrature over the mass shell in spherical momentum
/// coordinates. The radial map is exponential, k(t) = radial_scale
/// (e^{3t} - 1) for t in [0,1], matched to the gaussian decay of mollifier
/// transforms; k_max() = radial_scale (e^3 - 1). Polar nodes are
/// Gauss-Legendre in cos(theta), azimuthal nodes a uniform periodic rule.
/// refinement doubles every count that many times.
struct ShellGrid {
    int radial_nodes = 96;
    double radial_scale = 1.5;
    int polar_nodes = 48;
    int azimuthal_nodes = 96;
    int refinement = 0;

    double k_max() const;
    /// Counts with the refinement level applied.
    int eff_radial() const;
    int eff_polar() const;
    int eff_azimuthal() const;
    /// Same grid with every count scaled by the factor (used for the
    /// two-level error estimate).
    ShellGrid scaled(double factor) const;
    /// Throws std::invalid_argument unless all counts >= 4 and the scale is
    /// positive.
    void validate() const;
};

/// Grid adapted to integrands whose transforms decay like
/// exp(-min_width^2 k^2 / 2) and oscillate with spatial extent `extent`
/// (largest support diameter of the smearing pair) and azimuthal radius
/// `transverse` (largest distance from the z-axis).
ShellGrid suggest_shell_grid(double min_width, double extent, double transverse);

/// Full rank-4 kernel at p (all indices down).
Rank4 q_tensor(const FourVector& p, const TensorStructure& ts);

/// Hodge dual of a two-form in contravariant components:
/// (*f)^{rho sigma} = (1/2) eps^{rho sigma}_{tau upsilon} f^{tau upsilon}.
/// Satisfies ** = -1. Throws std::invalid_argument when the input is not
/// antisymmetric within tolerance.
Mat4 hodge_dual(const Mat4& f, double tol = 1e-9);
CMat4 hodge_dual(const CMat4& f, double tol = 1e-9);

/// Kernel contraction Q_{mu nu rho sigma}(p) a^{mu nu} b^{rho sigma}
/// collapsed to vector operations (valid for antisymmetric a, b):
///   4 c1 <u, v>_g + 4 c2 p_tau u_upsilon eps^{tau upsilon}_{rho sigma} b^{rho sigma}/ ...
/// with u^nu = p_mu a^{mu nu}, v^sigma = p_rho b^{rho sigma}. Agreement
/// with the explicit rank-4 contraction is part of the test suite.
std::complex<double> q_contract(const TensorStructure& ts, const FourVector& p, const CMat4& a,
                                const CMat4& b);

enum class ShellBranches { both, positive };

struct ShellSum {
    std::complex<double> value;
    /// Quadrature mass sum |weight| |integrand|: the scale against which
    /// cancellations in `value` happened.
    double l1 = 0.0;
    /// Largest |integrand| contribution density on the outermost radial
    /// node, relative to the largest over all nodes; an undecayed tail
    /// shows up here.
    double tail_ratio = 0.0;
};

/// Single-pass quadrature of Int d3k/(2 omega) [X(omega,k) - X(-omega,k)]
/// (or the positive branch only) at the given grid counts, omega =
/// sqrt(|k|^2 + m^2). Deterministic for any worker count: radial slices are
/// evaluated concurrently and reduced in index order.
ShellSum shell_sum(const std::function<std::complex<double>(const FourVector&)>& X, double m,
                   const ShellGrid& grid, ShellBranches branches, int workers = 1);

struct ReducedIntegral {
    std::complex<double> value;
    double error = 0.0;
};

/// Two-level evaluation of the mass-shell reduction of
/// Int dp eps(p0) delta(p^2 - m^2) X(p): value at the grid plus an error
/// estimate from a 5/8-scaled grid. Throws std::domain_error when the tail
/// monitor reports that the integrand has not decayed inside the radial
/// range.
ReducedIntegral mass_shell_reduce(const std::function<std::complex<double>(const FourVector&)>& X,
                                  double m, const ShellGrid& grid, int workers = 1);

/// Divergence of a smooth totally antisymmetric rank-3 sampler by central
/// differences: out^{mu nu}(x) = d_rho t^{rho mu nu}. Inputs built from a
/// dual vector b as t^{rho mu nu} = eps^{rho mu nu lambda} b_lambda s(x)
/// stay exactly antisymmetric; the result is then a closed-field test
/// smearing whose pairings must vanish.
TwoFormSampler three_form_divergence(const std::function<Ten3(const FourVector&)>& t,
                                     double step = 1e-3);

}  // namespace linklab
