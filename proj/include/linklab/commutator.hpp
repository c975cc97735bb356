#pragma once

/// \file commutator.hpp
/// Vacuum commutators and two-point pairings of a closed two-form field
/// pair, evaluated by contracting the momentum kernel with the transforms
/// of two-form smearings and reducing to the mass shell,
///   C(f, g) = sum_components Int dsigma(m) (2 pi)^{-3}
///             Int d3k/(2 omega) [X(omega,k) - X(-omega,k)],
///   X(p) = Q_{mu nu rho sigma}(p) f_hat^{mu nu}(-p) g_hat^{rho sigma}(p).
/// Intrinsic loop potentials are reached through cone co-primitives: the
/// commutator of the potentials smeared along two spacelike-separated
/// spatial loops is i (causal linking number) Z, with Z the dual-line
/// normalization measured by extract_Z.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "linklab/geometry.hpp"
#include "linklab/linking.hpp"
#include "linklab/smearing.hpp"
#include "linklab/spectral.hpp"

namespace linklab {

/// Momentum-space view of a real two-form smearing: hat(p) returns the
/// contravariant transform components Int f^{mu nu}(x) e^{i p x} d4x as an
/// antisymmetric matrix. Reality of the position-space field (all factories
/// below produce real fields) gives hat(-p) = conj hat(p), which the
/// commutator evaluation exploits. hat must be safe to call concurrently.
struct TwoFormSmearing {
    std::function<CMat4(const FourVector&)> hat;
    std::string label;
};

/// Canonical cone co-primitive of the loop function of (s, loop): a
/// two-form F with delta F = scale * l_{s,loop}, evaluated from cached loop
/// nodes. panels = 0 picks a count matched to oscillations up to the given
/// momentum radius.
TwoFormSmearing cone_smearing(const LoopSmearing& l, const FourVector& apex, int panels = 0,
                              double k_max = 30.0, int order = 8);

/// Transform of curl h for the loop one-form h = scale * l_{s,loop}:
/// (i/2)(p^mu h_hat^nu - p^nu h_hat^mu). Its co-derivative is box h.
TwoFormSmearing curl_smearing(const LoopSmearing& l, int panels = 0, double k_max = 30.0,
                              int order = 8);

/// Cone co-primitive of the loop function with the wave operator applied to
/// its scalar: the cone transform times the multiplier -p^2. Used to
/// compare the potential smeared with box h against the field smeared with
/// curl h.
TwoFormSmearing dalembert_cone_smearing(const LoopSmearing& l, const FourVector& apex,
                                        int panels = 0, double k_max = 30.0, int order = 8);

/// Constant antisymmetric matrix times a normalized gaussian at `center`:
/// f^{mu nu}(x) = m^{mu nu} s_w(x - center). Throws when m is not
/// antisymmetric.
TwoFormSmearing envelope_smearing(const Mat4& m, const FourVector& center, double width);

/// Totally antisymmetric rank-3 gaussian t^{rho mu nu} =
/// eps^{rho mu nu lambda} b_lambda s_w(x - center), as a position sampler.
std::function<Ten3(const FourVector&)> gaussian_three_form(const FourVector& b,
                                                           const FourVector& center, double width);

/// Transform of the divergence d_rho t^{rho mu nu} of the gaussian rank-3
/// family: a closed-field test smearing whose kernel pairings vanish.
TwoFormSmearing divergence_smearing(const FourVector& b, const FourVector& center, double width);

/// Transform of a general surface smearing from cached surface nodes.
TwoFormSmearing surface_smearing(const SurfaceSmearing& f, int panels = 16, int order = 8);

/// Pointwise Hodge dual of another smearing.
TwoFormSmearing dual_smearing(const TwoFormSmearing& f);

struct CommutatorReport {
    std::complex<double> value;
    double error_estimate = 0.0;
    /// Quadrature mass sum_nodes |weight * X|: the scale against which the
    /// evaluated cancellations happened. A |value| far below this is a
    /// genuine near-zero, not an unresolved integral.
    double l1_scale = 0.0;
    ShellGrid grid;
    std::string inputs;
};

/// Kernel pairing of two two-form smearings under the model. With
/// assume_real (the default) only the positive-frequency branch is
/// evaluated and the value is its doubled imaginary part, exact for real
/// smearings on the k -> -k symmetric grid; both-branch evaluation keeps
/// the real-part residual as an honest hermiticity diagnostic. Two-level
/// refinement supplies error_estimate; GridUnresolved is thrown when the
/// levels disagree by more than half on a value that stands clear of the
/// cancellation floor.
CommutatorReport smeared_field_commutator(const FieldPairModel& model, const TwoFormSmearing& f,
                                          const TwoFormSmearing& g, const ShellGrid& grid,
                                          int workers = 1, bool assume_real = true);

/// Positive-frequency pairing <F(f) G(g)> (no branch subtraction). For real
/// smearings the commutator is twice its imaginary part.
CommutatorReport two_point_function(const FieldPairModel& model, const TwoFormSmearing& f,
                                    const TwoFormSmearing& g, const ShellGrid& grid,
                                    int workers = 1);

struct IntrinsicOptions {
    int workers = 1;
    /// Evaluate both frequency branches (slower; keeps the hermiticity
    /// residual in the real part instead of projecting it away).
    bool both_branches = false;
    int loop_panels = 0;  // 0: automatic from grid.k_max() and loop speed
    int loop_order = 8;
    /// Spatial offset of the second apex pair used for the co-primitive
    /// independence cross-check (run at the coarse level).
    double apex_shift = 0.35;
};

/// Commutator of the intrinsic vector potentials of the pair smeared along
/// two loops: both slots are cone co-primitives with apexes at the loop
/// centroids. Preconditions: both loops spatial, spacelike separated with
/// margin exceeding both mollifier effective radii (std::domain_error
/// otherwise). The error estimate combines two-level refinement with an
/// apex-shift cross-check of co-primitive independence.
CommutatorReport intrinsic_commutator(const FieldPairModel& model, const Mollifier& s1,
                                      const ParamLoop& loop1, const Mollifier& s2,
                                      const ParamLoop& loop2, const ShellGrid& grid,
                                      const IntrinsicOptions& opt = {});

/// Hopf reference pair: unit circles in orthogonal planes, centers offset
/// by one radius, in the time-zero slice; causal linking number +1.
LinkedPair reference_link_pair();

struct ZReport {
    double z = 0.0;              // the measured normalization constant
    double imag_residual = 0.0;  // |Im(-i C)|, hermiticity defect
    double error = 0.0;
    CommutatorReport raw;
};

/// Measures Z from the reference pair: C = i Z there, so Z = -i C. Both
/// frequency branches are evaluated so the residual is meaningful.
ZReport extract_Z(const FieldPairModel& model, const Mollifier& s, const ShellGrid& grid,
                  int workers = 1);

struct ProportionalityRow {
    int lambda = 0;
    std::complex<double> value;
    double ratio = 0.0;  // Im(value) / z
    double error = 0.0;  // propagated from value and z errors
};

struct ProportionalityReport {
    ZReport z;
    std::vector<ProportionalityRow> rows;
};

/// Runs the intrinsic commutator over pairs of prescribed linking numbers
/// and divides by i Z: the ratios recover the linking numbers.
ProportionalityReport verify_linking_proportionality(const FieldPairModel& model,
                                                     const Mollifier& s,
                                                     const std::vector<int>& lambdas,
                                                     const ShellGrid& grid, int workers = 1);

struct ScalingRow {
    double kappa = 0.0;
    std::complex<double> value;
    std::complex<double> expected;  // kappa * reference value
    double deviation = 0.0;
};

/// Normalization dependence on the reference pair: slot-1 mollifiers of
/// total integral kappa give kappa times the reference value, independent
/// of their shape. kappa = 0 rows use the difference of two widths (a
/// mean-zero mollifier); other rows use gaussian(w_alt) scaled by kappa
/// against the gaussian(w_base) reference, so each row also exercises
/// width independence.
std::vector<ScalingRow> normalization_scaling_check(const FieldPairModel& model,
                                                    const std::vector<double>& kappas,
                                                    double w_base, double w_alt,
                                                    const ShellGrid& grid, int workers = 1);

struct MassRow {
    double m = 0.0;
    std::complex<double> value;
    double error = 0.0;
    double l1_scale = 0.0;
};

/// Intrinsic commutator on the reference pair as the spectrum varies:
/// m = 0 rows use the dual-line massless model, m > 0 rows a self-line
/// atom at m. Gapped rows must vanish.
std::vector<MassRow> mass_gap_sweep(const std::vector<double>& masses, const Mollifier& s,
                                    const ShellGrid& grid, int workers = 1);

struct PositivityReport {
    int trials = 0;
    /// min over trials of (<FF><GG> - |<FG>|^2) / (<FF><GG> + |<FG>|^2).
    double worst_margin = 0.0;
    /// min over trials of each self pairing relative to its l1 scale.
    double worst_self = 0.0;
    bool passed = false;
};

/// Cauchy-Schwarz battery on random gaussian-envelope smearings: the self
/// models must give nonnegative pairings dominating the cross pairing.
/// Deterministic for a fixed seed.
PositivityReport check_wightman_positivity(const FieldPairModel& model_f,
                                           const FieldPairModel& model_g,
                                           const FieldPairModel& model_cross, int trials,
                                           const ShellGrid& grid, std::uint32_t seed = 7,
                                           int workers = 1);

struct DalembertReport {
    std::complex<double> wave_first, curl_first;
    std::complex<double> wave_second, curl_second;
    double err_first = 0.0, err_second = 0.0;
};

/// The potential smeared with box h equals the field smeared with curl h:
/// compares the dalembert cone co-primitive against the curl transform in
/// each slot, with the other slot held on a cone smearing.
DalembertReport dalembert_curl_identity_check(const FieldPairModel& model, const Mollifier& s1,
                                              const ParamLoop& loop1, const Mollifier& s2,
                                              const ParamLoop& loop2, const ShellGrid& grid,
                                              int workers = 1);

}  // namespace linklab
