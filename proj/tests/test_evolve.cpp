#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "phnls/error.hpp"
#include "phnls/evolve.hpp"

using namespace phnls;
using std::numbers::pi;

namespace {

SpectralField smooth(const BasisSpec& sp, std::uint64_t seed, double decay = 0.05, double amp = 1.0) {
  InitialData init;
  init.kind = InitialData::Kind::random_sobolev;
  init.s = 1.0;
  init.decay = decay;
  init.amplitude = amp;
  return make_initial(init, sp, seed);
}

SpectralField gaussian(const BasisSpec& sp, double amp = 1.0) {
  InitialData init;
  init.amplitude = amp;
  init.momentum = 0.5;
  init.y0 = 0.3;
  return make_initial(init, sp, 0);
}

double rel(const SpectralField& a, const SpectralField& b) { return l2_norm(a - b) / l2_norm(b); }

}  // namespace

TEST_CASE("nonlinearity naming") {
  CHECK(gamma_of(Nonlinearity::defocusing) == 1.0);
  CHECK(gamma_of(Nonlinearity::focusing) == -1.0);
  CHECK(gamma_of(Nonlinearity::linear) == 0.0);
  CHECK(parse_nonlinearity("focusing") == Nonlinearity::focusing);
  CHECK_THROWS_AS(parse_nonlinearity("plus"), InvalidArgument);
}

TEST_CASE("linear propagation") {
  BasisSpec sp(8, 32, 16);
  auto f = smooth(sp, 1);
  CHECK(linear_propagate(f, 0).data() == f.data());
  auto e = SpectralField::unit_mode(sp, sp.Nx() / 2, 0);
  auto p = linear_propagate(e, pi)(sp.Nx() / 2, 0);
  CHECK(std::abs(p - cplx(-1.0)) <= 1e-15);
  for (double s : {0.0, 1.0, 2.0}) {
    double a = sobolev_norm(f, s), b = sobolev_norm(linear_propagate(f, 0.731), s);
    CHECK(std::abs(a - b) <= 1e-13 * a);
  }
  auto g1 = linear_propagate(linear_propagate(f, 0.3), 0.45), g2 = linear_propagate(f, 0.75);
  CHECK(rel(g1, g2) <= 1e-13);
}

TEST_CASE("heat propagation") {
  BasisSpec sp(8, 32, 16);
  auto e = SpectralField::unit_mode(sp, sp.Nx() / 2, 0);
  CHECK(heat_propagate(e, 1.0, HeatMethod::spectral)(sp.Nx() / 2, 0).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  auto f = smooth(sp, 2);
  CHECK(heat_propagate(f, 0.0, HeatMethod::spectral).data() == f.data());
  CHECK_THROWS_AS(heat_propagate(f, 0.0, HeatMethod::mehler), InvalidArgument);
  for (double t : {0.05, 0.3}) {
    auto a = heat_propagate(f, t, HeatMethod::spectral), b = heat_propagate(f, t, HeatMethod::mehler);
    CHECK(rel(b, a) < 1e-6);
  }
}

TEST_CASE("heat flow keeps non-negative data non-negative") {
  BasisSpec sp(8, 32, 16);
  InitialData init;
  auto f = make_initial(init, sp, 0);
  auto h = to_physical(heat_propagate(f, 0.1, HeatMethod::spectral));
  double mn = 1e300;
  for (auto z : h) mn = std::min(mn, z.real());
  CHECK(mn >= -1e-10);
}

TEST_CASE("split step basics") {
  BasisSpec sp(8, 64, 32);
  SpectralField z(sp);
  CHECK(nls_step(z, 1e-3, 1.0).is_zero());
  auto f = gaussian(sp);
  CHECK(rel(nls_step(f, 1e-3, 0.0), linear_propagate(f, 1e-3)) <= 1e-15);
  auto g = nls_step(f, 1e-3, 1.0);
  CHECK(std::abs(mass(g) - mass(f)) <= 1e-12 * mass(f));
  CHECK(rel(nls_step(g, -1e-3, 1.0), f) <= 1e-10);
  SpectralField bad = f;
  bad(0, 0) = NAN;
  CHECK_THROWS_AS(nls_step(bad, 1e-3, 1.0), NumericalError);
}

TEST_CASE("split step is second order") {
  BasisSpec sp(8, 32, 16);
  auto f = gaussian(sp, 1.5);
  SimConfig cfg{sp};
  cfg.t_end = 1.0;
  cfg.keep_frames = false;
  auto run = [&](double dt) {
    cfg.dt = dt;
    return simulate(cfg, f).final_state;
  };
  auto a = run(4e-3), b = run(2e-3), c = run(1e-3), ref = run(5e-4);
  double e1 = l2_norm(a - ref), e2 = l2_norm(b - ref), e3 = l2_norm(c - ref);
  // Errors against a dt/2 reference: ratio of successive errors.
  double r1 = l2_norm(a - b) / l2_norm(b - c);
  CHECK(r1 == doctest::Approx(4.0).epsilon(0.125));
  CHECK(e1 > e2);
  CHECK(e2 > e3);
}

TEST_CASE("simulate invariants") {
  BasisSpec sp(8, 32, 16);
  SimConfig cfg{sp};
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  cfg.output_stride = 10;
  cfg.nonlinearity = Nonlinearity::linear;
  cfg.initial.kind = InitialData::Kind::random_sobolev;
  auto lin = simulate(cfg);
  CHECK(lin.trajectory.size() == 11);
  for (const auto& o : lin.series) {
    CHECK(std::abs(o.h1 - lin.series[0].h1) <= 1e-12 * lin.series[0].h1);
    CHECK(std::abs(o.h4 - lin.series[0].h4) <= 1e-12 * lin.series[0].h4);
  }
  cfg.nonlinearity = Nonlinearity::defocusing;
  cfg.initial = InitialData{};
  cfg.spec = BasisSpec(8, 64, 32);
  auto nl = simulate(cfg);
  for (const auto& o : nl.series) CHECK(std::abs(o.mass - nl.series[0].mass) <= 1e-10 * nl.series[0].mass);
  for (std::size_t i = 1; i < nl.series.size(); ++i) CHECK(nl.series[i].t > nl.series[i - 1].t);

  cfg.dt = 1.0;
  CHECK_THROWS_AS(simulate(cfg), ResolutionError);
}

TEST_CASE("focusing blow-up detection") {
  BasisSpec sp(8, 32, 16);
  SimConfig cfg{sp};
  cfg.nonlinearity = Nonlinearity::focusing;
  cfg.dt = 1e-3;
  cfg.t_end = 0.2;
  cfg.initial.amplitude = 6.0;
  cfg.blowup_factor = 1.5;
  CHECK_THROWS_AS(simulate(cfg), BlowUpDetected);
  cfg.nonlinearity = Nonlinearity::linear;
  CHECK_NOTHROW(simulate(cfg));
}

TEST_CASE("energy definition sign") {
  BasisSpec sp(8, 32, 16);
  auto f = gaussian(sp);
  double h = 0.5 * std::pow(sobolev_norm(f, 1), 2), q = quartic_integral(f);
  CHECK(energy(f, 1.0) == doctest::Approx(h + 0.25 * q));
  CHECK(energy(f, -1.0) == doctest::Approx(h - 0.25 * q));
  // ∫|u|⁴ for the separable Gaussian: a⁴ (π w²/2)^{1/2} (2π)^{-1/2}
  CHECK(q == doctest::Approx(std::sqrt(pi / 2) / std::sqrt(2 * pi)).epsilon(1e-10));
}

TEST_CASE("picard iteration") {
  BasisSpec sp(8, 32, 16);
  SpectralField z(sp);
  auto pz = picard_iterate(z, 0.1, 3, 1.0, 20);
  for (auto& tr : pz.iterates)
    for (auto& f : tr.frames) CHECK(f.is_zero());
  auto f = gaussian(sp);
  auto p0 = picard_iterate(f, 0.1, 2, 0.0, 20);
  for (std::size_t n = 0; n < p0.iterates[0].size(); ++n) CHECK(p0.iterates[1].frames[n].data() == p0.iterates[0].frames[n].data());
  CHECK_THROWS_AS(picard_iterate(f, 2.0, 3, 1.0), InvalidArgument);
}

TEST_CASE("time derivatives") {
  BasisSpec sp(8, 32, 16);
  auto u = gaussian(sp);
  CHECK(time_derivative(u, 0, 1.0).data() == u.data());
  SpectralField z(sp);
  CHECK(time_derivative(z, 3, 1.0).is_zero());
  auto d1 = time_derivative(u, 1, 1.0);
  auto resid = d1 - cplx(0, 1) * apply_multiplier(u, Multiplier::sobolev(2));
  CHECK(l2_norm(resid) == doctest::Approx(l2_norm(cubic_term(u))).epsilon(1e-12));
  CHECK_THROWS_AS(time_derivative(u, 5, 1.0), Unsupported);

  // Compare ∂ₜ²u with a centered difference of ∂ₜu along the flow.
  SimConfig cfg{sp};
  cfg.dt = 1e-5;
  cfg.t_end = 1e-3;
  cfg.output_stride = 10;
  auto r = simulate(cfg, u);
  const auto& fr = r.trajectory.frames;
  auto d2 = time_derivative(fr[5], 2, 1.0);
  auto fd = time_derivative(fr[6], 1, 1.0) - time_derivative(fr[4], 1, 1.0);
  fd *= 1.0 / (2 * r.trajectory.dt);
  CHECK(rel(fd, d2) < 1e-4);
}
