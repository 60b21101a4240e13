#include "doctest.h"

#include <cmath>
#include <random>

#include "phnls/error.hpp"
#include "phnls/evolve.hpp"
#include "phnls/hermite.hpp"
#include "phnls/sampling.hpp"

using namespace phnls;

namespace {

SpectralField random_field(const BasisSpec& sp, std::size_t kcap, int jcap, unsigned seed) {
  SpectralField f(sp);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj)
    for (std::size_t k = 0; k < kcap; ++k)
      if (std::abs(sp.j_of(jj)) <= jcap) f(jj, k) = {g(rng), g(rng)};
  return f;
}

cplx pointwise(const SpectralField& f, double x, double y, Component c) {
  const auto& sp = f.spec();
  std::vector<double> h(sp.K() + 1);
  hermite_eval_all(y, sp.K() + 1, h.data());
  cplx s{};
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj)
    for (std::size_t k = 0; k < sp.K(); ++k) {
      double hk = h[k];
      if (c == Component::dy)
        hk = std::sqrt(2.0 * k) * (k ? h[k - 1] : 0.0) - y * h[k];
      cplx e = f(jj, k) * hk * std::polar(1.0, sp.xi(jj) * x);
      if (c == Component::dx) e *= cplx(0, sp.xi(jj));
      s += e;
    }
  return s / std::sqrt(2 * sp.Lx());
}

}  // namespace

TEST_CASE("sample grid matches pointwise synthesis") {
  BasisSpec sp(2.0, 16, 24);
  auto f = random_field(sp, 20, 5, 3);
  SampleGrid g(sp, 20, 32, -4.0, 5.0, 37);
  Component comps[3] = {Component::value, Component::dx, Component::dy};
  auto out = g.evaluate(f, 0.0, comps);
  double worst = 0, scale = 0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.Ny(); i += 5)
      for (std::size_t m = 0; m < g.Mx(); m += 3) {
        cplx ref = pointwise(f, sp.x(m, g.Mx()), g.y(i), comps[c]);
        worst = std::max(worst, std::abs(out[c][i * g.Mx() + m] - ref));
        scale = std::max(scale, std::abs(ref));
      }
  CHECK(worst < 1e-12 * scale);
}

TEST_CASE("sample grid time phase equals linear propagation") {
  BasisSpec sp(2.0, 16, 24);
  auto f = random_field(sp, 20, 5, 4);
  SampleGrid g(sp, 20, 16, -3.0, 3.0, 11);
  auto a = g.evaluate(f, 0.37);
  auto b = g.evaluate(linear_propagate(f, 0.37));
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  CHECK(d < 1e-12);
}

TEST_CASE("sample grid trapezoid recovers the L2 norm on a wide window") {
  BasisSpec sp(2.0, 16, 24);
  auto f = random_field(sp, 12, 4, 5);
  SampleGrid g(sp, 12, 16, -12.0, 12.0, 241);
  auto u = g.evaluate(f);
  std::vector<double> a(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) a[i] = std::norm(u[i]);
  double s = g.integrate(a);
  CHECK(s == doctest::Approx(l2_norm(f) * l2_norm(f)).epsilon(1e-12));
}

TEST_CASE("sample grid rejects modes beyond kmax") {
  BasisSpec sp(2.0, 16, 24);
  auto f = random_field(sp, 20, 5, 6);
  SampleGrid g(sp, 10, 16, -3.0, 3.0, 11);
  CHECK_THROWS_AS(g.evaluate(f), ShapeError);
  CHECK_THROWS_AS(SampleGrid(sp, 10, 8, -3.0, 3.0, 11), InvalidArgument);
}

TEST_CASE("rescaled Gauss-Hermite grid integrates quartic products exactly") {
  BasisSpec sp(2.0, 8, 12);
  SpectralField f(sp);
  f(5, 7) = 1.0;
  f(3, 2) = cplx(0.3, -0.4);
  auto g = SampleGrid::gaussian(sp, 8, 32, 4);
  auto u = g.evaluate(f);
  std::vector<double> a(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) a[i] = std::pow(std::norm(u[i]), 2);
  // oracle by a fine Riemann sum in y, exact trapezoid in x
  SampleGrid fine(sp, 8, 32, -12.0, 12.0, 24001);
  auto v = fine.evaluate(f);
  std::vector<double> b(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) b[i] = std::pow(std::norm(v[i]), 2);
  CHECK(g.integrate(a) == doctest::Approx(fine.integrate(b)).epsilon(1e-12));
}
