#include "support.hpp"

using namespace testsupport;

TEST_CASE("preset densities take their closed forms") {
  const auto b = fd_bundle(torus_fixture(), 32, 32);
  const auto inv = curv_invariants(b);

  const ScalarField<double> soap =
      density(EnergyModel<double>::soap_film(2.5), b);
  CHECK((soap - 2.5).abs().maxCoeff() == 0.0);

  const ScalarField<double> will =
      density(EnergyModel<double>::willmore(0.7), b);
  CHECK((will - 0.7 * inv.trace.square()).abs().maxCoeff() < 1e-13);

  const ScalarField<double> helf =
      density(EnergyModel<double>::helfrich(0.7, 2.5), b);
  CHECK((helf - will - soap).abs().maxCoeff() < 1e-13);
}

TEST_CASE("ill-formed models are rejected") {
  EnergyModel<double> dup{{{1.0, 2, 0}, {0.5, 2, 0}}};
  CHECK_THROWS_AS(validate(dup), ConfigError);
  EnergyModel<double> empty{};
  CHECK_THROWS_AS(validate(empty), ConfigError);
  EnergyModel<double> neg{{{1.0, -1, 0}}};
  CHECK_THROWS_AS(validate(neg), ConfigError);
}

TEST_CASE("soap film energy of the cylinder is the exact area") {
  const auto spec = SurfaceSpec<double>::cylinder(1.0, 2.0);
  // analytic bundle: constant integrand, so only the quadrature weight sum
  // enters and the total is exact to roundoff
  const auto grid = make_default_grid(spec, 48, 25);
  const double ea = total_energy(EnergyModel<double>::soap_film(1.0),
                                 analytic_bundle(spec, grid));
  CHECK(rel_err(ea, 4 * kPi) < 1e-13);
  // the finite-difference bundle inherits the O(h^4) truncation of the
  // trigonometric chart in its metric, so it is close but not exact
  const double ef = total_energy(EnergyModel<double>::soap_film(1.0),
                                 fd_bundle(spec, 48, 25));
  CHECK(rel_err(ef, 4 * kPi) < 1e-4);
  CHECK(rel_err(ef, 4 * kPi) > 1e-10);
}

TEST_CASE("soap film energy of the sphere band converges to the area") {
  const double mu = 1.3, R = 1.0, theta0 = 0.3;
  const auto spec = SurfaceSpec<double>::sphere_band(R, theta0);
  const double want = mu * 4 * kPi * R * R * std::cos(theta0);
  const double e64 =
      total_energy(EnergyModel<double>::soap_film(mu),
                   geometry_bundle(emb_of(spec, 64, 33)));
  const double e128 =
      total_energy(EnergyModel<double>::soap_film(mu),
                   geometry_bundle(emb_of(spec, 128, 65)));
  CHECK(rel_err(e64, want) < 5e-6);
  CHECK(rel_err(e128, want) < 5e-7);
  // fourth-order quadrature: each halving cuts the error by ~16
  CHECK(rel_err(e64, want) / rel_err(e128, want) > 8.0);
}

TEST_CASE("willmore energy of a sphere band is radius independent") {
  const double alpha = 0.7, theta0 = 0.3;
  const double want = 16 * kPi * alpha * std::cos(theta0);
  for (double R : {1.0, 2.0}) {
    const auto spec = SurfaceSpec<double>::sphere_band(R, theta0);
    const double e = total_energy(EnergyModel<double>::willmore(alpha),
                                  geometry_bundle(emb_of(spec, 96, 49)));
    CHECK(rel_err(e, want) < 1e-5);
  }
}

TEST_CASE("catenoid area quadrature converges at fourth order") {
  const auto spec = catenoid_fixture();
  const double want = catenoid_area(spec.neck, spec.length);
  // refine both directions together: the two directions' truncation terms
  // carry opposite signs here, so refining only one lets them cancel at
  // coarse resolution and the error can look like it grows
  auto area = [&](int n1, int n2) {
    return total_energy(EnergyModel<double>::soap_film(1.0),
                        geometry_bundle(emb_of(spec, n1, n2)));
  };
  const double err_coarse = std::abs(area(24, 17) - want);
  const double err_fine = std::abs(area(48, 33) - want);
  CHECK(err_coarse / err_fine > 8.0);
  CHECK(err_coarse / err_fine < 32.0);
  CHECK(err_fine < 1e-4 * want);
}

TEST_CASE("conjugate closed forms on analytic bundles") {
  const double alpha = 0.8, mu = 0.45, R = 1.5;
  const auto spec = SurfaceSpec<double>::sphere_band(R, 0.3);
  const auto b = analytic_bundle(spec, make_default_grid(spec, 24, 13));

  SUBCASE("soap film: no curvature conjugate, isotropic tension") {
    const auto conj = conjugates(EnergyModel<double>::soap_film(mu), b);
    CHECK(conj.curv_conjugate.cwiseAbs().maxCoeff() == 0.0);
    CHECK((conj.metric_conjugate + mu * b.metric_inv).cwiseAbs().maxCoeff() <
          1e-14);
  }

  SUBCASE("bending model on the sphere") {
    const auto conj = conjugates(EnergyModel<double>::helfrich(alpha, mu), b);
    // H^ab = 2 alpha I1 g^ab with I1 = 2/R
    const double hcoef = 4 * alpha / R;
    // T^ab = 4 alpha I1 K^ab - (alpha I1^2 + mu) g^ab, K^ab = g^ab / R
    const double tcoef = 8 * alpha / (R * R) - 4 * alpha / (R * R) - mu;
    for (Index i = 0; i < b.grid.nodes(); ++i) {
      for (int c = 0; c < 3; ++c) {
        CHECK(rel_err(conj.curv_conjugate(i, c), hcoef * b.metric_inv(i, c),
                      1e-12) < 1e-12);
        CHECK(rel_err(conj.metric_conjugate(i, c), tcoef * b.metric_inv(i, c),
                      1e-12) < 1e-12);
      }
    }
  }
}

TEST_CASE("closed-form conjugates match the perturbation oracle") {
  std::vector<EnergyModel<double>> models = {
      EnergyModel<double>::soap_film(0.9),
      EnergyModel<double>::willmore(1.1),
      EnergyModel<double>::helfrich(0.8, 0.45),
      // exercise the I2 branch and a mixed power
      EnergyModel<double>{{{0.6, 0, 1}, {0.3, 1, 1}, {0.2, 0, 2}}},
  };
  const double delta = 1e-5;
  for (const auto& spec : all_fixtures()) {
    CAPTURE(to_string(spec.kind));
    const auto b = fd_bundle(spec, 24, 25);
    for (const auto& model : models) {
      double coeff_scale = 0;
      for (const auto& t : model.terms) coeff_scale += std::abs(t.coeff);
      const auto conj = conjugates(model, b);
      for (Index node : std::vector<Index>{3, 77, 151, 260, 399, 512}) {
        const auto oracle = conjugates_fd_oracle(model, b, node, delta);
        const Mat2<double> closed_h = sym2_at(conj.curv_conjugate, node);
        const Mat2<double> closed_t = sym2_at(conj.metric_conjugate, node);
        const double floor = 0.01 * coeff_scale;
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) {
            CHECK(rel_err(closed_h(r, c), oracle.curv_conjugate(r, c), floor) <
                  1e-5);
            CHECK(rel_err(closed_t(r, c), oracle.metric_conjugate(r, c),
                          floor) < 1e-5);
          }
      }
    }
  }
}

TEST_CASE("multipliers are wired to the conjugates") {
  const auto spec = torus_fixture();
  const auto b = fd_bundle(spec, 32, 32);
  const auto model = EnergyModel<double>::helfrich(0.8, 0.45);
  const auto conj = conjugates(model, b);
  const auto m = multipliers(model, b, conj);

  CHECK((m.curv_multiplier + conj.curv_conjugate).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((m.metric_multiplier - 0.5 * conj.metric_conjugate)
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // l_n = (1/2) L^ab K_ab holds as an arithmetic identity
  const ScalarField<double> ln_again =
      0.5 * contract_pair<double>(m.curv_multiplier, b.curv);
  CHECK((m.norm_multiplier - ln_again).abs().maxCoeff() == 0.0);

  // l_perp = -(div L)^a
  const SurfVecField<double> div_l = cov_div_sym2(b, m.curv_multiplier);
  CHECK((m.orth_multiplier + div_l).cwiseAbs().maxCoeff() == 0.0);

  // single-call overload agrees
  const auto m2 = multipliers(model, b);
  CHECK((m2.curv_multiplier - m.curv_multiplier).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sphere multiplier values take their closed forms") {
  const double alpha = 0.8, mu = 0.45, R = 1.5;
  const auto spec = SurfaceSpec<double>::sphere_band(R, 0.3);
  const auto b = analytic_bundle(spec, make_default_grid(spec, 24, 13));
  const auto m = multipliers(EnergyModel<double>::helfrich(alpha, mu), b);

  // l_n = -(1/2) H^ab K_ab = -(1/2)(4 alpha / R)(2 / R)
  const double want_ln = -4 * alpha / (R * R);
  CHECK((m.norm_multiplier - want_ln).abs().maxCoeff() < 1e-12);

  // div of an isotropic tensor c g^ab vanishes by metric compatibility
  CHECK(m.orth_multiplier.cwiseAbs().maxCoeff() < 1e-10);
}
