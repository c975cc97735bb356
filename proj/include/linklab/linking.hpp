#pragma once

#include <stdexcept>

#include "linklab/geometry.hpp"

namespace linklab {

/// Quadrature value together with a two-level refinement error estimate.
struct LinkingEstimate {
    double value = 0.0;
    double error = 0.0;
};

/// Every attempted projection direction hit a degenerate configuration
/// (parallel projected segments, grazing intersections, depth ties).
struct DegenerateProjection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The quadrature engine and the crossing-count engine disagree.
struct EngineMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Linking number of the spatial images of two disjoint loops as the double
/// integral (1/4pi) Int det(da(u), db(v), a(u)-b(v)) / |a(u)-b(v)|^3 du dv,
/// evaluated by composite Gauss-Legendre product quadrature at `panels` and
/// 2 x `panels` panels per smooth piece. Only the spatial components enter.
/// Throws std::domain_error when the sampled minimum distance between the
/// curves is below 1e-3 of the curve scale; the integrand is near-singular
/// there and the result would be meaningless.
LinkingEstimate gauss_linking(const ParamLoop& a, const ParamLoop& b, int panels = 48,
                              int order = 8);

/// Half the signed sum over inter-curve crossings of the two polyline loops
/// projected along `direction` (spatial part, viewer on the +direction side).
/// A crossing counts +1 when the pair (over-strand direction, under-strand
/// direction) is positively oriented in the right-handed projection frame.
/// Near-degenerate projections are retried with slightly perturbed
/// directions; DegenerateProjection is thrown when retries run out.
/// Both loops must be polyline kind.
int crossing_sign_linking(const ParamLoop& a, const ParamLoop& b, const FourVector& direction);

/// Same, with a fixed built-in generic direction.
int crossing_sign_linking(const ParamLoop& a, const ParamLoop& b);

/// Linking number of the time-zero projections of two spatial, spacelike
/// separated loops. The integer comes from the crossing engine on polyline
/// approximations with `segments` vertices; the quadrature engine must agree
/// within 1e-3 (after one refinement round) or EngineMismatch is thrown.
/// Precondition violations throw std::domain_error.
int causal_linking_number(const ParamLoop& a, const ParamLoop& b, int segments = 512,
                          int panels = 48);

}  // namespace linklab
