#include "support.hpp"

using namespace testsupport;

namespace {

double max_err_sin(int n, Bc bc) {
  // f(u1) = sin(u1) on [0, 2 pi); derivative error in direction 1
  const auto g = make_grid(0.0, 2 * kPi, 0.0, 1.0, n, 8, bc, Bc::clamped);
  ScalarField<double> f(g.nodes());
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      f(g.idx(i1, i2)) = std::sin(g.u1(i1));
  const ScalarField<double> d = partial(g, f, 1);
  double err = 0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      err = std::max(err,
                     std::abs(d(g.idx(i1, i2)) - std::cos(g.u1(i1))));
  return err;
}

}  // namespace

TEST_CASE("derivative of a constant vanishes exactly") {
  for (Bc bc : {Bc::periodic, Bc::clamped}) {
    const auto g = make_grid(0.0, 1.0, 0.0, 1.0, 16, 16, bc, bc);
    const ScalarField<double> f = ScalarField<double>::Constant(g.nodes(), 3.7);
    CHECK(partial(g, f, 1).abs().maxCoeff() == 0.0);
    CHECK(partial(g, f, 2).abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("derivative ignores variation in the other direction") {
  const auto g =
      make_grid(0.0, 1.0, 0.0, 1.0, 16, 16, Bc::clamped, Bc::periodic);
  ScalarField<double> f(g.nodes());
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      f(g.idx(i1, i2)) = std::exp(std::sin(2 * kPi * g.u2(i2)));
  CHECK(partial(g, f, 1).abs().maxCoeff() == 0.0);
}

TEST_CASE("one-sided stencils are exact on quartics") {
  const auto g =
      make_grid(0.0, 1.0, 0.0, 1.0, 16, 8, Bc::clamped, Bc::periodic);
  ScalarField<double> f(g.nodes()), want(g.nodes());
  for (int i1 = 0; i1 < g.n1; ++i1) {
    const double x = g.u1(i1);
    for (int i2 = 0; i2 < g.n2; ++i2) {
      f(g.idx(i1, i2)) = 1 + x * (2 + x * (-3 + x * (0.5 + 0.25 * x)));
      want(g.idx(i1, i2)) = 2 + x * (-6 + x * (1.5 + x));
    }
  }
  const ScalarField<double> d = partial(g, f, 1);
  CHECK((d - want).abs().maxCoeff() < 1e-12);
}

TEST_CASE("sin derivative converges at fourth order") {
  for (Bc bc : {Bc::periodic, Bc::clamped}) {
    CAPTURE(int(bc));
    const double e32 = max_err_sin(32, bc);
    const double e64 = max_err_sin(64, bc);
    const double e128 = max_err_sin(128, bc);
    // absolute error bound C h^4 with a modest constant (the one-sided
    // edge stencils carry the largest truncation term, |f'''''| h^4 / 5)
    const double h = 2 * kPi / 32;
    CHECK(e32 < 0.5 * h * h * h * h);
    CHECK(e32 > 0.0);
    // halving h cuts the error by ~2^4
    CHECK(e32 / e64 > 12.0);
    CHECK(e32 / e64 < 20.0);
    CHECK(e64 / e128 > 12.0);
    CHECK(e64 / e128 < 20.0);
  }
}

TEST_CASE("vector fields differentiate column by column") {
  const auto g =
      make_grid(0.0, 2 * kPi, 0.0, 1.0, 24, 9, Bc::periodic, Bc::clamped);
  Vec3Field<double> v(g.nodes(), 3);
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Index i = g.idx(i1, i2);
      v(i, 0) = std::sin(g.u1(i1));
      v(i, 1) = g.u2(i2);
      v(i, 2) = std::cos(g.u1(i1)) * g.u2(i2);
    }
  const Vec3Field<double> d = partial(g, v, 1);
  for (int c = 0; c < 3; ++c) {
    const ScalarField<double> col = v.col(c).array();
    CHECK((partial(g, col, 1) - d.col(c).array()).abs().maxCoeff() == 0.0);
  }
  CHECK(partial(g, v, 2).col(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partial rejects a bad direction") {
  const auto g =
      make_grid(0.0, 1.0, 0.0, 1.0, 8, 8, Bc::periodic, Bc::periodic);
  const ScalarField<double> f = ScalarField<double>::Zero(g.nodes());
  CHECK_THROWS_AS(partial(g, f, 3), ConfigError);
}
