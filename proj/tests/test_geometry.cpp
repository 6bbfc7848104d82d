#include "support.hpp"

using namespace testsupport;

namespace {

double max_interior_diff(const Grid<double>& g, const auto& a, const auto& b,
                         int margin) {
  double worst = 0;
  for_interior(g, margin, [&](Index i) {
    for (Index c = 0; c < a.cols(); ++c)
      worst = std::max(worst, std::abs(a(i, c) - b(i, c)));
  });
  return worst;
}

}  // namespace

TEST_CASE("finite-difference geometry matches closed forms") {
  struct Case {
    SurfaceSpec<double> spec;
    int n1, n2;
  };
  for (const Case& c : {Case{sphere_fixture(), 64, 33},
                        Case{cylinder_fixture(), 64, 33},
                        Case{torus_fixture(), 64, 64}}) {
    CAPTURE(to_string(c.spec.kind));
    const auto grid = make_default_grid(c.spec, c.n1, c.n2);
    const auto fd = geometry_bundle(sample_surface(c.spec, grid));
    const auto exact = analytic_bundle(c.spec, grid);
    const int m = 4;
    CHECK(max_interior_diff(grid, fd.metric, exact.metric, m) < 1e-3);
    CHECK(max_interior_diff(grid, fd.curv, exact.curv, m) < 1e-3);
    CHECK(max_interior_diff(grid, fd.normal, exact.normal, m) < 1e-3);
    CHECK(max_interior_diff(grid, fd.christoffel, exact.christoffel, m) <
          1e-3);
    CHECK(max_interior_diff(
              grid, ScalarField<double>(fd.sqrt_g - exact.sqrt_g),
              ScalarField<double>::Zero(grid.nodes()), m) < 1e-3);
  }
}

TEST_CASE("outward normal makes the unit sphere trace +2") {
  const auto b = fd_bundle(SurfaceSpec<double>::sphere_band(1.0, 0.3), 48, 25);
  const ScalarField<double> tr = trace_lower(b, b.curv);
  double worst = 0;
  for_interior(b.grid, 4, [&](Index i) {
    worst = std::max(worst, std::abs(tr(i) - 2.0));
  });
  CHECK(worst < 1e-3);
}

TEST_CASE("curvature trace on cylinder and torus") {
  {
    const auto b = fd_bundle(SurfaceSpec<double>::cylinder(0.5, 2.0), 48, 25);
    const ScalarField<double> tr = trace_lower(b, b.curv);
    double worst = 0;
    for_interior(b.grid, 4,
                 [&](Index i) { worst = std::max(worst, std::abs(tr(i) - 2.0)); });
    CHECK(worst < 1e-3);
  }
  {
    const double R = 2.0, r = 1.0;
    const auto spec = SurfaceSpec<double>::torus(R, r);
    const auto grid = make_default_grid(spec, 64, 64);
    const auto b = geometry_bundle(sample_surface(spec, grid));
    const ScalarField<double> tr = trace_lower(b, b.curv);
    double worst = 0;
    for (int i1 = 0; i1 < grid.n1; ++i1)
      for (int i2 = 0; i2 < grid.n2; ++i2) {
        const double u = R + r * std::cos(grid.u2(i2));
        const double want = (R + 2 * r * std::cos(grid.u2(i2))) / (r * u);
        worst = std::max(worst,
                         std::abs(tr(grid.idx(i1, i2)) - want));
      }
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("metric inverse and area element are consistent") {
  for (const auto& spec : all_fixtures()) {
    CAPTURE(to_string(spec.kind));
    const auto b = fd_bundle(spec, 24, 25);
    for (Index i = 0; i < b.grid.nodes(); ++i) {
      const Mat2<double> gg = sym2_at(b.metric, i) * sym2_at(b.metric_inv, i);
      CHECK((gg - Mat2<double>::Identity()).cwiseAbs().maxCoeff() < 1e-12);
      const double det =
          b.metric(i, 0) * b.metric(i, 2) - b.metric(i, 1) * b.metric(i, 1);
      CHECK(rel_err(b.sqrt_g(i) * b.sqrt_g(i), det, 1e-12) < 1e-10);
    }
    const ScalarField<double> tr = trace_lower(b, b.metric);
    CHECK((tr - 2.0).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("curvature asymmetry defect is at discretization level") {
  const auto b = fd_bundle(sphere_fixture(), 64, 33);
  double worst = 0;
  for_interior(b.grid, 4, [&](Index i) {
    worst = std::max(worst, std::abs(b.curv_asym(i)));
  });
  CHECK(worst < 1e-3);
}

TEST_CASE("orientation flip negates normal and curvature exactly") {
  const auto spec = torus_fixture();
  const auto emb = emb_of(spec, 32, 32);
  const auto std_b = geometry_bundle(emb);
  const auto flip_b = geometry_bundle(emb, Orientation::flipped);
  CHECK((std_b.normal + flip_b.normal).cwiseAbs().maxCoeff() == 0.0);
  CHECK((std_b.curv + flip_b.curv).cwiseAbs().maxCoeff() == 0.0);
  CHECK((std_b.metric - flip_b.metric).cwiseAbs().maxCoeff() == 0.0);
  CHECK((std_b.christoffel - flip_b.christoffel).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("degenerate embeddings raise an immersion error naming the node") {
  const auto g =
      make_grid(0.0, 1.0, 0.0, 1.0, 12, 12, Bc::clamped, Bc::clamped);
  EmbeddingField<double> emb;
  emb.grid = g;
  emb.positions.resize(g.nodes(), 3);
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      emb.positions.row(g.idx(i1, i2)) << g.u1(i1), g.u1(i1), 0.0;
  try {
    geometry_bundle(emb);
    FAIL("expected ImmersionError");
  } catch (const ImmersionError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }

  EmbeddingField<double> nan_emb = emb_of(sphere_fixture(), 16, 9);
  nan_emb.positions(5, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(geometry_bundle(nan_emb), ImmersionError);
}

TEST_CASE("covariant operators annihilate constants exactly") {
  const auto b = fd_bundle(catenoid_fixture(), 24, 17);
  const ScalarField<double> c = ScalarField<double>::Constant(b.grid.nodes(), 4.2);
  CHECK(cov_grad_scalar(b.grid, c).cwiseAbs().maxCoeff() == 0.0);
  CHECK(laplace_beltrami(b, c).abs().maxCoeff() == 0.0);
  const SurfVecField<double> zero = SurfVecField<double>::Zero(b.grid.nodes(), 2);
  CHECK(cov_div_vector(b, zero).abs().maxCoeff() == 0.0);
}

TEST_CASE("covariant divergence respects metric compatibility") {
  // grad_a g^ab = 0; checks the Christoffel contraction wiring
  {
    const auto spec = torus_fixture();
    const auto grid = make_default_grid(spec, 64, 64);
    const auto b = analytic_bundle(spec, grid);
    const SurfVecField<double> div = cov_div_sym2(b, b.metric_inv);
    CHECK(div.cwiseAbs().maxCoeff() < 1e-4);
  }
  {
    const auto b = fd_bundle(sphere_fixture(), 64, 33);
    const SurfVecField<double> div = cov_div_sym2(b, b.metric_inv);
    double worst = 0;
    for_interior(b.grid, 4, [&](Index i) {
      worst = std::max(worst, std::abs(div(i, 0)));
      worst = std::max(worst, std::abs(div(i, 1)));
    });
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("laplacian reproduces the sphere eigenfunction") {
  // f = z on the unit sphere: lap f = -2 f
  const auto b = fd_bundle(sphere_fixture(), 64, 33);
  const auto emb = emb_of(sphere_fixture(), 64, 33);
  const ScalarField<double> f = emb.positions.col(2).array();
  const ScalarField<double> lap = laplace_beltrami(b, f);
  double worst = 0;
  for_interior(b.grid, 4, [&](Index i) {
    worst = std::max(worst, std::abs(lap(i) + 2.0 * f(i)));
  });
  CHECK(worst < 1e-3);
}

TEST_CASE("torus laplacian of the curvature trace matches the hand formula") {
  const double R = 2.0, r = 1.0;
  const auto spec = SurfaceSpec<double>::torus(R, r);

  auto max_err = [&](int n) {
    const auto grid = make_default_grid(spec, n, n);
    const auto b = analytic_bundle(spec, grid);
    const ScalarField<double> lap =
        laplace_beltrami(b, ScalarField<double>(trace_lower(b, b.curv)));
    double worst = 0;
    for (int i1 = 0; i1 < grid.n1; ++i1)
      for (int i2 = 0; i2 < grid.n2; ++i2) {
        const double u = R + r * std::cos(grid.u2(i2));
        const double want = -R * (R * std::cos(grid.u2(i2)) + r) /
                            (r * r * u * u * u);
        worst = std::max(worst, std::abs(lap(grid.idx(i1, i2)) - want));
      }
    return worst;
  };

  const double e64 = max_err(64), e128 = max_err(128);
  CHECK(e64 < 1e-2);
  CHECK(e64 / e128 > 8.0);
  CHECK(e64 / e128 < 32.0);
}

TEST_CASE("raise and lower are mutually inverse") {
  const auto b = fd_bundle(ellipsoid_fixture(), 24, 17);
  auto gen = rng();
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  Sym2Field<double> t(b.grid.nodes(), 3);
  for (Index i = 0; i < t.rows(); ++i)
    t.row(i) << dist(gen), dist(gen), dist(gen);
  const Sym2Field<double> round = lower_sym2(b, raise_sym2(b, t));
  CHECK((round - t).cwiseAbs().maxCoeff() < 1e-10);
}
