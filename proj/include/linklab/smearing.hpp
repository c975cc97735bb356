#pragma once

/// \file smearing.hpp
/// Mollifiers, loop and surface test functions, co-derivative and curl,
/// explicit co-primitives, and Fourier transforms.
///
/// Conventions:
///   * co-derivative on two-forms (delta f)^mu = -2 d_nu f^{nu mu},
///     on one-forms delta h = -d_nu h^nu
///   * Fourier transform g_hat(p) = Int d4x g(x) e^{i p.x} with the
///     Minkowski product p.x; then l_hat^mu(p) = s_hat(p) Int du
///     e^{-i p.gamma(u)} gammadot^mu(u), and co-closedness of h reads
///     p_mu h_hat^mu(p) = 0
///   * loop function  l^mu(x)    =        Int du  s(x + gamma(u)) gammadot^mu
///   * surface function f^{munu}(x) = -(1/2) Int d2u s(x + sigma(u)) sigma^{munu}

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "linklab/geometry.hpp"

namespace linklab {

using C4 = std::array<std::complex<double>, 4>;
using CMat4 = std::array<std::array<std::complex<double>, 4>, 4>;

using ScalarSampler = std::function<double(const FourVector&)>;
using OneFormSampler = std::function<FourVector(const FourVector&)>;
using TwoFormSampler = std::function<Mat4(const FourVector&)>;

/// Smooth even scalar test function, stored as a weighted list of radial
/// atoms so that differences and rescalings stay in the class. The pure
/// constructors are normalized to integral one.
///
/// gaussian(w): product over the four axes of (2 pi w^2)^{-1/2} e^{-x^2/2w^2};
///   transform e^{-w^2 (p0^2+|pv|^2)/2}; effective radius 8w (tail < 2e-14).
/// bump(r): product over the four axes of e^{-1/(1-(x/r)^2)} / (r beta) on
///   |x| < r; exact support is the box |x_i| <= r, contained in the ball of
///   radius 2r; the 1d transform is evaluated by cached quadrature.
class Mollifier {
  public:
    struct Atom {
        bool is_bump = false;
        double param = 1.0;  // gaussian width w or bump radius r
        double coef = 1.0;
    };

    static Mollifier gaussian(double width);
    static Mollifier bump(double radius);

    /// c * s (scales the integral by c as well).
    Mollifier scaled(double c) const;
    /// Pointwise sum s + other; integrals add.
    Mollifier mixed_with(const Mollifier& other) const;

    double operator()(const FourVector& x) const;
    /// Fourier transform; real since s is even.
    double hat(const FourVector& p) const;
    /// Total integral (the kappa of scaled or mixed instances).
    double integral() const;
    /// Radius beyond which the function is numerically negligible.
    double effective_radius() const;

    const std::vector<Atom>& atoms() const { return atoms_; }

  private:
    std::vector<Atom> atoms_;
};

/// kappa * l_{s,gamma}; scale is the kappa of normalization statements.
struct LoopSmearing {
    Mollifier s;
    ParamLoop loop;
    double scale = 1.0;
};

struct SurfaceSmearing {
    Mollifier s;
    ParamSurface surface;
    double scale = 1.0;
};

FourVector eval_loop_function(const LoopSmearing& l, const FourVector& x, int panels = 24,
                              int order = 8);

Mat4 eval_surface_function(const SurfaceSmearing& f, const FourVector& x, int panels = 16,
                           int order = 8);

/// Conservative bound on the support of the evaluated loop function: the
/// loop function lives within effective_radius of the reflected loop image
/// {-gamma(u)}.
ParamLoop::Ball support_bound(const LoopSmearing& l);

/// (delta f)^mu = -2 d_nu f^{nu mu} by central differences; O(step^2).
FourVector co_derivative_fd(const TwoFormSampler& f, const FourVector& x, double step);

/// delta h = -d_nu h^nu by central differences; O(step^2).
double co_derivative_one_form_fd(const OneFormSampler& h, const FourVector& x, double step);

/// Antisymmetric derivative (1/2)(d^nu h^mu - d^mu h^nu) (indices raised by
/// the metric), by central differences. Normalized so that for co-closed h
/// its co-derivative is exactly the wave operator: delta(curl h) = box h.
Mat4 curl_fd(const OneFormSampler& h, const FourVector& x, double step);

/// Transport two-form f^{y,munu}(x) = (1/2) Int_0^1 du
/// (y^nu h^mu(x-uy) - y^mu h^nu(x-uy)); for co-closed h it satisfies
/// delta f^y = h - h_y with h_y(x) = h(x-y). Support lies in the cylinder
/// supp(h) + [0,1] y.
TwoFormSampler translation_coprimitive(const OneFormSampler& h, const FourVector& y,
                                       int panels = 24, int order = 8);
TwoFormSampler translation_coprimitive(const LoopSmearing& h, const FourVector& y,
                                       int panels = 24, int order = 8);

/// Loop transport two-form f^{munu}(x) = (1/2) Int_0^1 du
/// (h^mu(x+gamma(u)) gammadot^nu - h^nu(x+gamma(u)) gammadot^mu); when
/// delta h = t the co-derivative is delta f = l_{t,gamma}, i.e. the loop
/// function of the scalar t along gamma.
TwoFormSampler loop_transport_coprimitive(const OneFormSampler& h, const ParamLoop& loop,
                                          int panels = 24, int order = 8);

/// One-form h with delta h = -d_nu h^nu = s1 - kappa s1hat, built by
/// iterated one-dimensional transport of the axis marginals (both mollifier
/// kinds factor over the axes). Throws std::invalid_argument when the
/// difference has nonzero total integral beyond 1e-10.
OneFormSampler scalar_coprimitive(const Mollifier& s1, const Mollifier& s1hat, double kappa);

/// l_hat^mu(p) = scale * s_hat(p) Int du e^{-i p.gamma(u)} gammadot^mu(u).
C4 fourier_loop(const LoopSmearing& l, const FourVector& p, int panels = 24, int order = 8);

/// f_hat^{munu}(p) = -(1/2) scale * s_hat(p) Int d2u e^{-i p.sigma(u)}
/// sigma^{munu}(u).
CMat4 fourier_surface(const SurfaceSmearing& f, const FourVector& p, int panels = 16,
                      int order = 8);

/// Phi(q) = ((1+iq) e^{-iq} - 1)/q^2, the closed-form integral over the
/// radial cone coordinate; series branch near q = 0.
std::complex<double> cone_phi(double q);

/// Transform of the canonical cone co-primitive F = -f_{s,cone(gamma)} of a
/// loop smearing (delta F = kappa l_{s,gamma}); the v-integral over the cone
/// is done in closed form, leaving a single u-quadrature:
///   F_hat^{munu}(p) = (scale/2) s_hat(p) e^{-i p.a}
///     Int du Phi(p.d(u)) [gammadot^mu d^nu - gammadot^nu d^mu](u),
/// where d(u) = gamma(u) - a and Phi(q) = ((1+iq)e^{-iq} - 1)/q^2.
CMat4 fourier_loop_coprimitive(const LoopSmearing& l, const FourVector& apex, const FourVector& p,
                               int panels = 24, int order = 8);

/// Direct midpoint-rule transform of a scalar sampler over the box
/// [lo, hi]^4 with n cells per axis: validation oracle for the closed-form
/// transforms. boundary_max is the largest |g| sampled on the outermost
/// cell layer; a value comparable to interior samples means the box is too
/// small.
struct GridTransform {
    std::complex<double> value;
    double boundary_max = 0.0;
};
GridTransform grid_fourier(const ScalarSampler& g, const FourVector& p, const FourVector& lo,
                           const FourVector& hi, int n);

}  // namespace linklab
