#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "phnls/error.hpp"
#include "phnls/spectral.hpp"

using namespace phnls;
using std::numbers::pi;

namespace {

SpectralField random_field(const BasisSpec& sp, std::uint64_t seed, double decay = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SpectralField f(sp);
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj)
    for (std::size_t k = 0; k < sp.K(); ++k) {
      double w = decay > 0 ? std::exp(-decay * sp.eigenvalue(jj, k)) : 1.0;
      f(jj, k) = w * cplx(g(rng), g(rng));
    }
  return f;
}

double rel_diff(const SpectralField& a, const SpectralField& b) { return l2_norm(a - b) / l2_norm(b); }

}  // namespace

TEST_CASE("basis spec validation and spectrum") {
  CHECK_THROWS_AS(BasisSpec(16, 7, 4), InvalidArgument);
  CHECK_THROWS_AS(BasisSpec(-1, 8, 4), InvalidArgument);
  CHECK_THROWS_AS(BasisSpec(16, 8, 0), InvalidArgument);
  BasisSpec sp(16, 256, 128);
  CHECK(sp.lambda_max() == doctest::Approx(std::pow(pi * 256 / 32, 2) + 255));
  CHECK(sp.x(0) == -16.0);
  CHECK(sp.xi(128) == 0.0);
  CHECK(sp.xi(129) == doctest::Approx(pi / 16));
}

TEST_CASE("single-mode physical field maps to a unit coefficient") {
  BasisSpec sp(4, 16, 8);
  const auto& r = sp.hermite().rule();
  const std::size_t n = sp.hermite().nodes(), Nx = sp.Nx();
  std::vector<cplx> u(n * Nx);
  double xi1 = pi / sp.Lx();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < Nx; ++m)
      u[i * Nx + m] = std::polar(1.0, xi1 * sp.x(m)) * hermite_eval(0, r.nodes[i]) / std::sqrt(2 * sp.Lx());
  SpectralField c = to_spectral(u, sp);
  for (std::size_t jj = 0; jj < Nx; ++jj)
    for (std::size_t k = 0; k < sp.K(); ++k)
      CHECK(std::abs(c(jj, k) - ((sp.j_of(jj) == 1 && k == 0) ? 1.0 : 0.0)) <= 1e-13);

  auto back = to_physical(c);
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(back[i] - u[i]) <= 1e-13);

  SpectralField z(sp);
  for (auto v : to_physical(z)) CHECK(v == cplx{});
  CHECK(to_spectral(to_physical(z), sp).is_zero());
  CHECK_THROWS_AS(to_spectral(std::vector<cplx>(3), sp), ShapeError);
}

TEST_CASE("roundtrip and Parseval on native and padded grids") {
  BasisSpec sp(8, 64, 32);
  auto f = random_field(sp, 11);
  for (std::size_t Mx : {0u, 96u, 128u}) {
    auto u = to_physical(f, Mx);
    auto g = to_spectral(u, sp, Mx);
    CHECK(rel_diff(g, f) <= 1e-10);
    std::vector<double> dens(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) dens[i] = std::norm(u[i]);
    double l2 = grid_integral(dens, sp, Mx);
    double c2 = std::pow(l2_norm(f), 2);
    CHECK(std::abs(l2 - c2) <= 1e-12 * c2);
  }
}

TEST_CASE("multipliers") {
  BasisSpec sp(pi, 8, 4);
  auto f = random_field(sp, 2);
  CHECK(apply_multiplier(f, Multiplier::identity()).data() == f.data());
  CHECK(apply_multiplier(f, Multiplier::heat(0.0)).data() == f.data());

  std::size_t j0 = sp.Nx() / 2, j1 = j0 + 1;  // ξ = 0 and ξ = 1 when Lx = π
  auto e00 = SpectralField::unit_mode(sp, j0, 0);
  auto e11 = SpectralField::unit_mode(sp, j1, 1);
  CHECK(apply_multiplier(e00, Multiplier::sobolev(1))(j0, 0) == cplx(1.0));
  CHECK(apply_multiplier(e11, Multiplier::sobolev(1))(j1, 1).real() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(apply_multiplier(e00, Multiplier::heat(1))(j0, 0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  auto m1 = Multiplier::sobolev(0.7), m2 = Multiplier::schrodinger(0.3);
  auto a = apply_multiplier(f, m1 * m2);
  auto b = apply_multiplier(apply_multiplier(f, m2), m1);
  for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(std::abs(a.data()[i] - b.data()[i]) <= 1e-15 * std::abs(a.data()[i]) + 1e-300);

  Multiplier bad{[](double, std::size_t) { return cplx(INFINITY); }};
  CHECK_THROWS_AS(apply_multiplier(f, bad), NumericalError);
  SpectralField z(sp);
  CHECK_NOTHROW(apply_multiplier(z, bad));
}

TEST_CASE("sobolev norm") {
  BasisSpec sp(3, 16, 8);
  for (std::size_t jj : {0u, 5u, 8u}) {
    auto e = SpectralField::unit_mode(sp, jj, 3);
    CHECK(sobolev_norm(e, 1.3) == doctest::Approx(std::pow(sp.eigenvalue(jj, 3), 0.65)).epsilon(1e-14));
  }
  auto f = random_field(sp, 5);
  CHECK(sobolev_norm(f, 0) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
  double prev = 0;
  for (double s = -1; s <= 4; s += 0.25) {
    double v = sobolev_norm(f, s);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("equivalent norm") {
  BasisSpec sp(8, 32, 16);
  auto f = random_field(sp, 9, 0.05);
  CHECK(equivalent_norm(f, 0) == doctest::Approx(l2_norm(f)).epsilon(1e-14));
  CHECK_THROWS_AS(equivalent_norm(f, 1), Unsupported);
  CHECK_THROWS_AS(equivalent_norm(f, 2.5), Unsupported);

  // ⟨y⟩² h_0 = (1 + y²) h_0 = (3/2) h_0 + (1/sqrt2) h_2 ; -∂y² h_0 = (1 - y²) h_0.
  // Exact values: ‖(1+y²)h0‖² = 9/4 + 1/2, ‖(1-y²)h0‖² = 1/4 + 1/2.
  auto e = SpectralField::unit_mode(sp, sp.Nx() / 2, 0);
  CHECK(equivalent_norm(e, 2) == doctest::Approx(std::sqrt(0.5 * (2.75 + 0.75))).epsilon(1e-14));

  // Ratio to the A-adapted norm stays bounded and is resolution stable.
  for (int s : {2, 4}) {
    double lo = 1e300, hi = 0;
    for (int t = 0; t < 100; ++t) {
      auto g = random_field(sp, 100 + t, 0.02);
      double r = sobolev_norm(g, s) / equivalent_norm(g, s);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(lo > 0.1);
    CHECK(hi < 10);
    BasisSpec sp2(8, 64, 32);
    double lo2 = 1e300, hi2 = 0;
    for (int t = 0; t < 100; ++t) {
      auto g = random_field(sp, 100 + t, 0.02);
      SpectralField g2(sp2);
      for (std::size_t jj = 0; jj < sp.Nx(); ++jj)
        for (std::size_t k = 0; k < sp.K(); ++k) g2(jj + sp.Nx() / 2, k) = g(jj, k);
      double r = sobolev_norm(g2, s) / equivalent_norm(g2, s);
      lo2 = std::min(lo2, r);
      hi2 = std::max(hi2, r);
    }
    CHECK(std::abs(lo2 / lo - 1) < 0.1);
    CHECK(std::abs(hi2 / hi - 1) < 0.1);
  }
}

TEST_CASE("littlewood-paley profile") {
  CHECK(lp_phi(0.5) == 1.0);
  CHECK(lp_phi(1.0) == 1.0);
  CHECK(lp_phi(2.0) == 0.0);
  CHECK(lp_phi(1.5) == doctest::Approx(0.5));
  double prev = 1.0;
  for (double l = 0; l < 3; l += 1e-3) {
    double v = lp_phi(l);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  for (int N : {2, 4, 8, 16}) CHECK(lp_psi(N, N * N) == 1.0);
}

TEST_CASE("projector algebra") {
  BasisSpec sp(4, 64, 64);
  auto f = random_field(sp, 21);
  int Nmax = 1;
  while (static_cast<double>(Nmax) * Nmax < 2 * sp.lambda_max()) Nmax *= 2;
  auto sum = lp_project(f, 1, LPKind::S);
  for (int N = 2; N <= Nmax; N *= 2) sum += lp_project(f, N, LPKind::Delta);
  CHECK(l2_norm(sum - f) <= 1e-12 * l2_norm(f));
  CHECK(rel_diff(lp_project(f, Nmax, LPKind::S), f) == 0.0);

  for (int N = 2; N <= 16; N *= 2)
    for (int M = 2; M <= 16; M *= 2) {
      auto dd = lp_project(lp_project(f, M, LPKind::Delta), N, LPKind::Delta);
      if (std::abs(std::log2(N) - std::log2(M)) >= 2) CHECK(dd.is_zero());
      if (M <= N / 2) {
        auto dm = lp_project(f, M, LPKind::Delta);
        CHECK(lp_project(dm, N, LPKind::S).data() == dm.data());
      }
    }
  CHECK_THROWS_AS(lp_project(f, 3, LPKind::S), InvalidArgument);
  CHECK_THROWS_AS(lp_project(f, 1, LPKind::Delta), InvalidArgument);
}

TEST_CASE("indicator projections") {
  BasisSpec sp(2, 32, 32);
  auto f = random_field(sp, 4);
  auto p1 = indicator_project(f, 1);
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj)
    for (std::size_t k = 0; k < sp.K(); ++k) {
      double e = sp.eigenvalue(jj, k);
      CHECK((p1(jj, k) != cplx{}) == (e >= 1 && e < 4));
    }
  CHECK(p1(sp.Nx() / 2, 0) == f(sp.Nx() / 2, 0));

  SpectralField sum(sp);
  int top = shell_index(sp.lambda_max());
  std::vector<SpectralField> parts;
  for (int l = 0; l <= top; ++l) parts.push_back(indicator_project(f, l));
  for (auto& p : parts) sum += p;
  CHECK(sum.data() == f.data());
  for (std::size_t a = 0; a < parts.size(); a += 3)
    for (std::size_t b = a + 1; b < parts.size(); b += 5) CHECK(inner(parts[a], parts[b]) == cplx{});

  CHECK(shell_index(4.0) == 2);
  CHECK(shell_index(3.999999) == 1);
  CHECK(shell_index(1.0) == 1);
}
