#include "linklab/commutator.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

using namespace linklab;
using cd = std::complex<double>;

namespace {

Mat4 sample_matrix() {
    Mat4 m{};
    m[0][1] = 0.8;
    m[1][0] = -0.8;
    m[0][3] = -0.4;
    m[3][0] = 0.4;
    m[1][2] = 1.1;
    m[2][1] = -1.1;
    return m;
}

ShellGrid envelope_grid() {
    ShellGrid g;
    g.radial_scale = 13.0 / std::expm1(3.0);
    g.radial_nodes = 64;
    g.polar_nodes = 40;
    g.azimuthal_nodes = 48;
    return g;
}

ShellGrid hopf_grid(double width = 0.12) {
    return suggest_shell_grid(width, 4.8, 2.2).scaled(0.55);
}

double cabs_max(const CMat4& m) {
    double v = 0.0;
    for (const auto& row : m)
        for (const auto& e : row) v = std::max(v, std::abs(e));
    return v;
}

}  // namespace

TEST_CASE("envelope and divergence transforms match the grid oracle") {
    const FourVector center{0.15, -0.2, 0.1, 0.3};
    const double w = 0.45;
    const TwoFormSmearing env = envelope_smearing(sample_matrix(), center, w);

    const Mollifier s = Mollifier::gaussian(w);
    const FourVector p{1.2, -0.7, 0.4, 0.9};
    const FourVector lo = center - FourVector{3.0, 3.0, 3.0, 3.0};
    const FourVector hi = center + FourVector{3.0, 3.0, 3.0, 3.0};
    {
        const CMat4 got = env.hat(p);
        const GridTransform oracle = grid_fourier(
            [&](const FourVector& x) { return 0.8 * s(x - center); }, p, lo, hi, 30);
        CHECK(oracle.boundary_max < 1e-9);
        CHECK(std::abs(got[0][1] - oracle.value) < 1e-7);
        CHECK(std::abs(got[1][0] + oracle.value) < 1e-7);
    }

    Mat4 sym{};
    sym[0][1] = 1.0;
    CHECK_THROWS_AS(envelope_smearing(sym, center, w), std::invalid_argument);

    const FourVector b{0.7, -0.3, 1.1, 0.4};
    const TwoFormSmearing div = divergence_smearing(b, center, w);
    const TwoFormSampler div_pos = three_form_divergence(gaussian_three_form(b, center, w), 1e-3);
    for (int mu : {0, 2}) {
        for (int nu : {1, 3}) {
            const GridTransform oracle = grid_fourier(
                [&](const FourVector& x) { return div_pos(x)[mu][nu]; }, p, lo, hi, 30);
            CHECK(std::abs(div.hat(p)[mu][nu] - oracle.value) < 1e-5);
        }
    }
}

TEST_CASE("cached cone and curl transforms reproduce the reference formulas") {
    const LinkedPair pair = reference_link_pair();
    const LoopSmearing l{Mollifier::gaussian(0.2), pair.first, 1.3};
    const FourVector apex{0.1, -0.3, 0.2, 0.4};
    const TwoFormSmearing cone = cone_smearing(l, apex, 24, 30.0, 8);
    const TwoFormSmearing curl = curl_smearing(l, 24, 30.0, 8);
    const TwoFormSmearing wave = dalembert_cone_smearing(l, apex, 24, 30.0, 8);

    std::mt19937 rng(41);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int trial = 0; trial < 5; ++trial) {
        const FourVector p{u(rng), u(rng), u(rng), u(rng)};
        const CMat4 want = fourier_loop_coprimitive(l, apex, p, 24, 8);
        const CMat4 got = cone.hat(p);
        const C4 lh = fourier_loop(l, p, 24, 8);
        const CMat4 gotc = curl.hat(p);
        const CMat4 gotw = wave.hat(p);
        const double psq = minkowski_inner(p, p);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                CHECK(std::abs(got[i][j] - want[i][j]) < 1e-13 * (1.0 + cabs_max(want)));
                const cd curl_want = cd(0.0, 0.5) * (p[i] * lh[j] - p[j] * lh[i]);
                CHECK(std::abs(gotc[i][j] - curl_want) < 1e-13 * (1.0 + std::abs(curl_want)));
                CHECK(std::abs(gotw[i][j] + psq * want[i][j]) < 1e-12 * (1.0 + cabs_max(want)));
            }
    }
}

TEST_CASE("surface smearing transform matches the direct surface transform") {
    const LinkedPair pair = reference_link_pair();
    const SurfaceSmearing f{Mollifier::gaussian(0.3), cone_surface(pair.first, {0.0, 0.0, 0.0, 0.0}),
                            -1.2};
    const TwoFormSmearing cached = surface_smearing(f, 16, 8);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 3; ++trial) {
        const FourVector p{u(rng), u(rng), u(rng), u(rng)};
        const CMat4 want = fourier_surface(f, p, 16, 8);
        const CMat4 got = cached.hat(p);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(std::abs(got[i][j] - want[i][j]) < 1e-13 * (1.0 + cabs_max(want)));
    }
}

TEST_CASE("commutator of a smearing with itself vanishes") {
    const TwoFormSmearing f = envelope_smearing(sample_matrix(), {0.1, 0.2, -0.1, 0.0}, 0.3);
    for (const auto& model : {massless_model(1.0, 0.0), massless_model(0.7, 1.3)}) {
        const CommutatorReport rep = smeared_field_commutator(model, f, f, envelope_grid());
        CHECK(std::abs(rep.value) < 1e-13 * rep.l1_scale);
    }
}

TEST_CASE("commutator purity, equivalence of branch modes, bilinearity") {
    const TwoFormSmearing f = envelope_smearing(sample_matrix(), {0.0, 0.3, 0.1, -0.2}, 0.3);
    Mat4 m2{};
    m2[0][2] = 1.0;
    m2[2][0] = -1.0;
    m2[1][3] = -0.6;
    m2[3][1] = 0.6;
    const TwoFormSmearing g = envelope_smearing(m2, {0.2, -0.4, 0.3, 0.1}, 0.35);
    const FieldPairModel model = massless_model(1.0, 0.8);
    const ShellGrid grid = envelope_grid();

    const CommutatorReport fast = smeared_field_commutator(model, f, g, grid);
    const CommutatorReport both = smeared_field_commutator(model, f, g, grid, 1, false);
    CHECK(std::abs(both.value.real()) < 1e-12 * std::abs(both.value));
    CHECK(std::abs(fast.value - both.value) < 1e-12 * std::abs(both.value));
    CHECK(fast.value.real() == 0.0);

    Mat4 m3 = m2;
    for (auto& row : m3)
        for (auto& e : row) e *= 2.0;
    const TwoFormSmearing g2 = envelope_smearing(m3, {0.2, -0.4, 0.3, 0.1}, 0.35);
    const CommutatorReport doubled = smeared_field_commutator(model, f, g2, grid);
    CHECK(std::abs(doubled.value - 2.0 * fast.value) < 1e-13 * std::abs(doubled.value));
}

TEST_CASE("spacelike-separated envelopes commute, timelike-related ones do not") {
    const FieldPairModel model = massless_model(1.0, 0.0);
    const double w = 0.25;
    const TwoFormSmearing f = envelope_smearing(sample_matrix(), {0.0, 0.0, 0.0, 0.0}, w);
    const TwoFormSmearing g_space = envelope_smearing(sample_matrix(), {0.0, 2.5, 0.0, 0.0}, w);
    const TwoFormSmearing g_time = envelope_smearing(sample_matrix(), {2.5, 0.0, 0.0, 0.0}, w);
    const ShellGrid grid = suggest_shell_grid(w, 3.5, 1.0);
    const CommutatorReport space = smeared_field_commutator(model, f, g_space, grid);
    const CommutatorReport timelike = smeared_field_commutator(model, f, g_time, grid);
    CHECK(std::abs(timelike.value) > 1e-5 * timelike.l1_scale);
    CHECK(std::abs(space.value) < 1e-3 * std::abs(timelike.value));
}

TEST_CASE("dual-line pairing equals twice the self line against the dualized slot") {
    const TwoFormSmearing f = envelope_smearing(sample_matrix(), {0.1, -0.2, 0.25, 0.0}, 0.3);
    Mat4 m2{};
    m2[0][3] = 0.9;
    m2[3][0] = -0.9;
    m2[1][2] = 0.5;
    m2[2][1] = -0.5;
    const TwoFormSmearing g = envelope_smearing(m2, {-0.1, 0.3, 0.0, 0.2}, 0.33);
    const ShellGrid grid = envelope_grid();
    const CommutatorReport dual_line = smeared_field_commutator(massless_model(0.0, 1.0), f, g, grid);
    const CommutatorReport self_dualized =
        smeared_field_commutator(massless_model(1.0, 0.0), f, dual_smearing(g), grid);
    CHECK(std::abs(dual_line.value - 2.0 * self_dualized.value) <
          1e-11 * (std::abs(dual_line.value) + dual_line.l1_scale * 1e-6));
}

TEST_CASE("divergence smearings annihilate every pairing in both slots") {
    const TwoFormSmearing t = divergence_smearing({0.6, -0.2, 0.9, 0.3}, {0.1, 0.0, -0.1, 0.2}, 0.3);
    const TwoFormSmearing g = envelope_smearing(sample_matrix(), {0.0, 0.4, -0.2, 0.1}, 0.3);
    const ShellGrid grid = envelope_grid();
    for (const auto& model :
         {massless_model(1.0, 0.0), massless_model(0.8, 1.1), massive_atom_model(1.5)}) {
        const CommutatorReport first = smeared_field_commutator(model, t, g, grid);
        CHECK(std::abs(first.value) < 1e-8 * first.l1_scale);
        const CommutatorReport second = smeared_field_commutator(model, g, t, grid);
        CHECK(std::abs(second.value) < 1e-8 * second.l1_scale);
    }
}

TEST_CASE("intrinsic commutator on the reference pair") {
    const Mollifier s = Mollifier::gaussian(0.12);
    const ShellGrid grid = hopf_grid();
    const LinkedPair pair = reference_link_pair();

    const ZReport z = extract_Z(massless_model(0.0, 1.0), s, grid);
    CHECK(std::abs(z.z) > 1e-4 * z.raw.l1_scale);
    CHECK(z.imag_residual < 1e-10 * std::abs(z.z));
    CHECK(z.raw.error_estimate < 0.05 * std::abs(z.z));

    const CommutatorReport swapped =
        intrinsic_commutator(massless_model(0.0, 1.0), s, pair.second, s, pair.first, grid);
    CHECK(std::abs(swapped.value.imag() - z.z) < 1e-10 * std::abs(z.z));

    const CommutatorReport reversed = intrinsic_commutator(massless_model(0.0, 1.0), s,
                                                           pair.first.reversed(), s, pair.second,
                                                           grid);
    CHECK(std::abs(reversed.value.imag() + z.z) < 1e-9 * std::abs(z.z));

    const CommutatorReport tripled =
        intrinsic_commutator(massless_model(0.0, 3.0), s, pair.first, s, pair.second, grid);
    CHECK(std::abs(tripled.value.imag() - 3.0 * z.z) < 1e-10 * std::abs(z.z));

    const CommutatorReport self_line =
        intrinsic_commutator(massless_model(1.0, 0.0), s, pair.first, s, pair.second, grid);
    CHECK(std::abs(self_line.value) < 5e-3 * std::abs(z.z));

    const CommutatorReport gapped =
        intrinsic_commutator(massive_atom_model(6.0), s, pair.first, s, pair.second, grid);
    CHECK(std::abs(gapped.value) < 5e-3 * std::abs(z.z));
}

TEST_CASE("intrinsic commutator rejects bad geometry") {
    const Mollifier s = Mollifier::gaussian(0.12);
    const ShellGrid grid = hopf_grid();
    const LinkedPair pair = reference_link_pair();
    const FieldPairModel model = massless_model(0.0, 1.0);

    ParamLoop tilted(ParamLoop::Path{
        [](double u) {
            return FourVector{0.8 * std::sin(2.0 * M_PI * u), std::cos(2.0 * M_PI * u),
                              std::sin(2.0 * M_PI * u), 0.0};
        },
        [](double u) {
            return FourVector{0.8 * 2.0 * M_PI * std::cos(2.0 * M_PI * u),
                              -2.0 * M_PI * std::sin(2.0 * M_PI * u),
                              2.0 * M_PI * std::cos(2.0 * M_PI * u), 0.0};
        }});
    CHECK_THROWS_AS(intrinsic_commutator(model, s, tilted, s, pair.second, grid),
                    std::domain_error);

    const ParamLoop near = make_circle({0.0, 0.3, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0},
                                       {0.0, 0.0, 1.0, 0.0}, 1.0);
    CHECK_THROWS_AS(intrinsic_commutator(model, s, pair.first, s, near, grid), std::domain_error);
}

TEST_CASE("linking proportionality holds away from the reference pair") {
    const Mollifier s = Mollifier::gaussian(0.12);
    const ShellGrid grid = hopf_grid();
    const ProportionalityReport rep =
        verify_linking_proportionality(massless_model(0.0, 1.0), s, {-1, 2}, grid);
    REQUIRE(rep.rows.size() == 2);
    CHECK(std::abs(rep.rows[0].ratio + 1.0) < 0.03);
    CHECK(std::abs(rep.rows[1].ratio - 2.0) < 0.06);
}

TEST_CASE("normalization scaling and width independence") {
    const ShellGrid grid = hopf_grid();
    const auto rows =
        normalization_scaling_check(massless_model(0.0, 1.0), {0.0, 2.0}, 0.12, 0.09, grid);
    REQUIRE(rows.size() == 2);
    const double ref = std::abs(rows[1].expected) / 2.0;
    CHECK(ref > 0.0);
    CHECK(rows[0].deviation < 0.02 * ref);
    CHECK(rows[1].deviation < 0.04 * std::abs(rows[1].expected));
}

TEST_CASE("mass gap sweep and spectral mixtures") {
    const Mollifier s = Mollifier::gaussian(0.12);
    const ShellGrid grid = hopf_grid();
    const auto rows = mass_gap_sweep({0.0, 6.0}, s, grid);
    REQUIRE(rows.size() == 2);
    CHECK(std::abs(rows[0].value) > 1e-4 * rows[0].l1_scale);
    CHECK(std::abs(rows[1].value) < 5e-3 * std::abs(rows[0].value));

    FieldPairModel mixed;
    mixed.components.push_back({MassComponent::atom(0.0, 1.0), {0.0, 1.0}});
    mixed.components.push_back(
        {MassComponent::continuum(5.0, 7.0, [](double) { return 0.4; }, 4), {1.0, 0.0}});
    const LinkedPair pair = reference_link_pair();
    const CommutatorReport mixed_rep =
        intrinsic_commutator(mixed, s, pair.first, s, pair.second, grid);
    CHECK(std::abs(mixed_rep.value - rows[0].value) < 0.01 * std::abs(rows[0].value));
}

TEST_CASE("two-point pairing: positivity, star isometry, commutator relation") {
    const FieldPairModel self = massless_model(-1.0, 0.0);
    const ShellGrid grid = envelope_grid();
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> entry(-1.0, 1.0), posn(-0.4, 0.4), wid(0.25, 0.45);
    for (int trial = 0; trial < 8; ++trial) {
        Mat4 m{};
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                m[i][j] = entry(rng);
                m[j][i] = -m[i][j];
            }
        const TwoFormSmearing f =
            envelope_smearing(m, {posn(rng), posn(rng), posn(rng), posn(rng)}, wid(rng));
        const CommutatorReport self_pair = two_point_function(self, f, f, grid);
        CHECK(self_pair.value.real() >= 0.0);
        CHECK(std::abs(self_pair.value.imag()) < 1e-12 * self_pair.l1_scale);

        const CommutatorReport dualized =
            two_point_function(self, dual_smearing(f), dual_smearing(f), grid);
        CHECK(std::abs(dualized.value - self_pair.value) < 1e-11 * self_pair.l1_scale);
    }

    const TwoFormSmearing f = envelope_smearing(sample_matrix(), {0.1, 0.2, 0.0, -0.1}, 0.3);
    Mat4 m2{};
    m2[0][2] = 0.7;
    m2[2][0] = -0.7;
    m2[2][3] = -0.4;
    m2[3][2] = 0.4;
    const TwoFormSmearing g = envelope_smearing(m2, {-0.2, 0.1, 0.3, 0.2}, 0.35);
    const FieldPairModel model = massless_model(0.6, -0.9);
    const CommutatorReport tp = two_point_function(model, f, g, grid);
    const CommutatorReport comm = smeared_field_commutator(model, f, g, grid);
    CHECK(std::abs(comm.value - cd(0.0, 2.0 * tp.value.imag())) < 1e-13 * std::abs(comm.value));
}

TEST_CASE("wightman positivity battery on threshold and dominated models") {
    const double c = 0.8;
    const FieldPairModel self_f = massless_model(-1.0, 0.0, c);
    const FieldPairModel cross = massless_model(0.0, -c / 2.0);
    const ShellGrid grid = envelope_grid().scaled(0.75);

    const PositivityReport threshold = check_wightman_positivity(self_f, self_f, cross, 12, grid);
    CHECK(threshold.trials == 12);
    CHECK(threshold.passed);
    CHECK(threshold.worst_margin >= -1e-4);
    CHECK(threshold.worst_self >= -1e-12);

    const FieldPairModel dominated = massless_model(-1.0, 0.0, 2.0 * c);
    const PositivityReport dom = check_wightman_positivity(dominated, dominated, cross, 12, grid);
    CHECK(dom.passed);
    CHECK(dom.worst_margin > 0.1);
}

TEST_CASE("wave-operator potential smearing equals the curl field smearing") {
    const Mollifier s = Mollifier::gaussian(0.14);
    const ParamLoop a =
        make_circle({0.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}, 1.0);
    const ParamLoop b =
        make_circle({1.0, 0.3, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.6, 0.8}, 0.8);
    const ShellGrid grid = suggest_shell_grid(0.14, 3.6, 2.4).scaled(0.55);
    const DalembertReport rep =
        dalembert_curl_identity_check(massive_atom_model(1.5), s, a, s, b, grid);
    CHECK(std::abs(rep.wave_first) > 1e-6);
    CHECK(std::abs(rep.wave_first) > 1e3 * rep.err_first);
    CHECK(std::abs(rep.wave_second) > 1e3 * rep.err_second);
    CHECK(rep.err_first < 1e-5 * std::abs(rep.wave_first));
    CHECK(rep.err_second < 1e-5 * std::abs(rep.wave_second));
}

TEST_CASE("commutator evaluation is worker-count independent") {
    const TwoFormSmearing f = envelope_smearing(sample_matrix(), {0.0, 0.3, 0.1, -0.2}, 0.3);
    Mat4 m2{};
    m2[0][2] = 1.0;
    m2[2][0] = -1.0;
    const TwoFormSmearing g = envelope_smearing(m2, {0.2, -0.4, 0.3, 0.1}, 0.35);
    const FieldPairModel model = massless_model(1.0, 0.8);
    const ShellGrid grid = envelope_grid();
    const CommutatorReport one = smeared_field_commutator(model, f, g, grid, 1);
    const CommutatorReport three = smeared_field_commutator(model, f, g, grid, 3);
    CHECK(one.value.real() == three.value.real());
    CHECK(one.value.imag() == three.value.imag());
}
