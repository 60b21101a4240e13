#include <cmath>
#include <numbers>

#include "doctest.h"
#include "phnls/error.hpp"
#include "phnls/growth.hpp"
#include "phnls/sampling.hpp"

using namespace phnls;

namespace {

const BasisSpec kSmall{8.0, 32, 16};
const BasisSpec kMid{16.0, 64, 32};

SimConfig small_run(const BasisSpec& sp, double t_end, double dt, std::size_t stride) {
  SimConfig c;
  c.spec = sp;
  c.dt = dt;
  c.t_end = t_end;
  c.output_stride = stride;
  c.initial.momentum = 0.5;
  c.initial.y0 = 0.3;
  c.initial.width = 2.0;  // x-spectrum well inside the small bases
  return c;
}

// ‖|u|²u‖ without projection: Gauss-Hermite rule exact for |u|⁶.
double cubic_oracle(const SpectralField& u) {
  auto e = mode_extent(u);
  auto g = SampleGrid::gaussian(u.spec(), e.kmax, 8 * u.spec().Nx(), 6);
  auto v = g.evaluate(u);
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = std::pow(std::norm(v[i]), 3);
  return std::sqrt(g.integrate(d));
}

// Dense uniform-grid quadrature of a product of four sampled fields.
cplx dense_quartic(const std::array<SpectralField, 4>& f, const std::array<bool, 4>& conj, bool bracket) {
  const BasisSpec& sp = f[0].spec();
  SampleGrid g(sp, sp.K(), 4 * sp.Nx(), -14.0, 14.0, 4001);
  std::array<std::vector<cplx>, 4> v;
  for (int i = 0; i < 4; ++i) {
    v[i] = g.evaluate(f[i]);
    if (conj[i])
      for (auto& z : v[i]) z = std::conj(z);
  }
  std::vector<cplx> p(v[0].size());
  for (std::size_t iy = 0; iy < g.Ny(); ++iy)
    for (std::size_t m = 0; m < g.Mx(); ++m) {
      std::size_t q = iy * g.Mx() + m;
      double w = bracket ? 1.0 + g.y(iy) * g.y(iy) : 1.0;
      p[q] = w * v[0][q] * v[1][q] * v[2][q] * v[3][q];
    }
  return g.integrate(p);
}

SpectralField dx_field(const SpectralField& u) {
  Multiplier m{[](double xi, std::size_t) { return cplx(0.0, xi); }};
  return apply_multiplier(u, m);
}

}  // namespace

TEST_CASE("comparability k=1 s=0 equals the cubic norm on every frame") {
  SimConfig c = small_run(BasisSpec(16.0, 128, 64), 0.2, 2e-3, 20);
  c.initial.width = 1.0;
  auto r = simulate(c);
  REQUIRE(r.trajectory.size() == 6);
  for (const auto& u : r.trajectory.frames) {
    auto [lhs, rhs] = comparability_check(u, 1, 0.0, 1.0);
    CHECK(std::abs(lhs - cubic_oracle(u)) <= 1e-10 * lhs);
    CHECK(rhs == doctest::Approx(sobolev_norm(u, 1.0)).epsilon(1e-15));
  }
}

TEST_CASE("comparability edge cases") {
  SpectralField z(kSmall);
  auto [l0, r0] = comparability_check(z, 2, 1.0, 1.0);
  CHECK(l0 == 0.0);
  CHECK(r0 == 0.0);
  SpectralField u = make_initial(InitialData{}, kSmall, 0);
  CHECK(comparability_check(u, 1, 2.0, 0.0).first <= 1e-12 * sobolev_norm(u, 4.0));
  CHECK(comparability_check(u, 2, 0.0, 0.0).first <= 1e-12 * sobolev_norm(u, 4.0));
  CHECK_THROWS_AS(comparability_check(u, 3, 0.0, 1.0), Unsupported);
  CHECK_THROWS_AS(comparability_check(u, 1, 3.0, 1.0), InvalidArgument);
}

// A random field spread over the torus; a localized packet disperses in x and
// ‖|u|²u‖ decays like 1/t while ‖u‖_{H¹} stays put.
TEST_CASE("comparability ratio stays in a fixed band for a unit H1 defocusing datum") {
  SimConfig c = small_run(kMid, 10.0, 2e-3, 125);
  c.initial.kind = InitialData::Kind::random_sobolev;
  c.initial.norm_target = 1.0;
  c.initial.norm_s = 1.0;
  auto r = simulate(c);
  for (int k : {1, 2}) {
    double lo = INFINITY, hi = 0;
    for (const auto& u : r.trajectory.frames) {
      auto [lhs, rhs] = comparability_check(u, k, 0.0, 1.0);
      lo = std::min(lo, lhs / rhs);
      hi = std::max(hi, lhs / rhs);
    }
    CHECK(hi / lo < 3.0);
  }
}

TEST_CASE("modified energy term: identity pattern is the quartic integral") {
  SpectralField u = make_initial(InitialData{}, kSmall, 0);
  EnergyTermSpec t;
  cplx v = modified_energy_term(u, t, 1.0);
  CHECK(v.real() >= 0);
  CHECK(std::abs(v.imag()) <= 1e-14);
  CHECK(v.real() == doctest::Approx(quartic_integral(u)).epsilon(1e-12));
  CHECK(modified_energy_term(SpectralField(kSmall), t, 1.0) == cplx(0.0));
}

TEST_CASE("modified energy term matches a dense-grid oracle") {
  InitialData init;
  init.momentum = 0.7;
  init.y0 = 0.4;
  init.width = 1.3;
  SpectralField u = make_initial(init, kMid, 0);
  SpectralField ub = u;

  SUBCASE("dx") {
    EnergyTermSpec t;
    t.L = EnergyTermSpec::Op::dx;
    t.conj = {false, true, false, true};
    SpectralField d = dx_field(u);
    cplx ref = dense_quartic({d, d, u, u}, t.conj, false);
    CHECK(std::abs(modified_energy_term(u, t, 1.0) - ref) <= 1e-8 * std::abs(ref));
  }
  SUBCASE("bracket y") {
    EnergyTermSpec t;
    t.L = EnergyTermSpec::Op::bracket_y;
    t.conj = {false, false, true, true};
    cplx ref = dense_quartic({u, u, u, u}, t.conj, true);
    CHECK(std::abs(modified_energy_term(u, t, 1.0) - ref) <= 1e-8 * std::abs(ref));
  }
  SUBCASE("time derivative orders") {
    EnergyTermSpec t;
    t.type = EnergyTermSpec::Type::R;
    t.k = 1;
    t.orders = {1, 1, 0};
    t.conj = {true, false, false, true};
    SpectralField d1 = time_derivative(u, 1, 1.0);
    cplx ref = dense_quartic({d1, d1, d1, u}, t.conj, false);
    CHECK(std::abs(modified_energy_term(u, t, 1.0) - ref) <= 1e-8 * std::abs(ref));
  }
}

TEST_CASE("energy term validation") {
  SpectralField u = make_initial(InitialData{}, kSmall, 0);
  EnergyTermSpec t;
  t.k = 1;
  t.orders = {0, 0, 0};
  CHECK_THROWS_AS(modified_energy_term(u, t, 1.0), InvalidArgument);
  t.orders = {1, 0, 0};
  CHECK_NOTHROW(modified_energy_term(u, t, 1.0));
  t.type = EnergyTermSpec::Type::R;
  t.orders = {2, 0, 0};
  CHECK_THROWS_AS(modified_energy_term(u, t, 1.0), InvalidArgument);
  t.orders = {1, 1, 0};
  CHECK_NOTHROW(modified_energy_term(u, t, 1.0));
  t.type = EnergyTermSpec::Type::S;
  t.k = 5;
  t.orders = {5, 0, 0};
  CHECK_THROWS_AS(modified_energy_term(u, t, 1.0), Unsupported);
}

TEST_CASE("energy identity: linear runs and zero data") {
  SimConfig c = small_run(kSmall, 0.2, 1e-3, 5);
  c.nonlinearity = Nonlinearity::linear;
  auto r = simulate(c);
  for (int k : {0, 1}) {
    auto chk = energy_derivative_check(r.trajectory, k, 0.0);
    CHECK(chk.max_residual <= 1e-10);
    CHECK(chk.scale == 0.0);
  }
  Trajectory z;
  z.dt = 1e-2;
  z.frames.assign(4, SpectralField(kSmall));
  CHECK(energy_derivative_check(z, 1, 1.0).max_residual == 0.0);
  z.dt = 2e-2;
  CHECK_THROWS_AS(energy_derivative_check(z, 0, 1.0), ResolutionError);
  z.dt = 1e-2;
  CHECK_THROWS_AS(energy_derivative_check(z, 2, 1.0), InvalidArgument);
}

TEST_CASE("energy identity residual is second order in the frame spacing") {
  SimConfig c = small_run(kMid, 0.4, 1e-3, 5);
  c.initial.amplitude = 1.5;
  auto r = simulate(c);
  for (int k : {0, 1}) {
    auto chk = energy_derivative_check(r.trajectory, k, 1.0);
    CHECK(chk.max_residual < 1e-2 * chk.scale);
    double ratio = energy_identity_richardson(r.trajectory, k, 1.0);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.25));
  }
}

TEST_CASE("growth: linear control is flat") {
  SimConfig c = small_run(kSmall, 1.0, 4e-3, 1);
  c.nonlinearity = Nonlinearity::linear;
  for (int k : {1, 2}) {
    auto r = track_growth(c, k, 10.0, 25);
    CHECK(std::abs(r.alpha) <= 0.01);
    CHECK(r.h1_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.bound == doctest::Approx(2.0 / 3.0 * (2 * k - 1)));
  }
}

TEST_CASE("growth: small amplitude stays perturbative") {
  SimConfig c = small_run(kSmall, 1.0, 4e-3, 1);
  c.initial.amplitude = 1e-3;
  auto r = track_growth(c, 1, 10.0, 25);
  CHECK(std::abs(r.alpha) <= 0.05);
  CHECK(r.mass_drift <= 1e-10);
}

TEST_CASE("growth: defocusing report contents") {
  SimConfig c = small_run(kMid, 1.0, 4e-3, 1);
  c.seed = 7;
  auto r = track_growth(c, 1, 4.0, 50);
  REQUIRE(r.t.size() == 21);
  for (std::size_t n = 1; n < r.t.size(); ++n) CHECK(r.t[n] > r.t[n - 1]);
  CHECK(std::isfinite(r.alpha));
  CHECK(r.alpha_lo <= r.alpha);
  CHECK(r.alpha_hi >= r.alpha);
  CHECK(r.mass_drift <= 1e-10);
  CHECK(r.energy_drift <= 1e-3);
  CHECK(r.h1_ratio < kH1RatioLimit);
  CHECK(r.file_stem() == "growth_seed7_k1_defocusing_T4");
  auto csv = r.to_csv();
  CHECK(csv.rfind("t,h2,h1,mass,energy\n", 0) == 0);
  auto j = r.to_json();
  CHECK(j["fit"].contains("alpha"));
  CHECK(j["config"]["seed"] == 7);
  CHECK(j["bound"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(j["series"]["t"].size() == 21);
  CHECK(r.to_json().dump() == j.dump());
}

TEST_CASE("growth: preconditions") {
  SimConfig c = small_run(kSmall, 1.0, 4e-3, 1);
  CHECK_THROWS_AS(track_growth(c, 3, 1.0, 10), InvalidArgument);
  CHECK_THROWS_AS(track_growth(c, 1, 1.0, 0), InvalidArgument);
  CHECK_THROWS_AS(track_growth(c, 1, 0.04, 5), InvalidArgument);
}

TEST_CASE("growth: strongly focusing data violate the H1 assumption") {
  SimConfig c = small_run(kSmall, 1.0, 1e-3, 1);
  c.nonlinearity = Nonlinearity::focusing;
  c.initial.amplitude = 4.0;
  c.initial.width = 0.7;
  CHECK_THROWS_AS(track_growth(c, 1, 2.0, 20), AssumptionViolated);
}
