#include <cmath>
#include <numbers>

#include "estlab_detail.hpp"
#include "phnls/parallel.hpp"
#include "phnls/bourgain.hpp"
#include "phnls/error.hpp"
#include "phnls/estlab.hpp"
#include "phnls/sampling.hpp"

namespace phnls {

using detail::product_spacing;
using detail::torus_points;

double trapezoid(std::span<const double> v, double dt) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * dt;
}

BilinearProfile bilinear_profile(const SpectralField& f, const SpectralField& g, double T, std::size_t frames,
                                 bool with_h1) {
  if (!(f.spec() == g.spec())) throw ShapeError("bilinear_profile: factors on different bases");
  if (frames < 2) throw InvalidArgument("bilinear_profile: need at least two frames");
  const ModeExtent ef = mode_extent(f), eg = mode_extent(g);
  if (ef.kmax == 0 || eg.kmax == 0) throw EmptySample("bilinear_profile: zero factor");
  // The window follows the factor of lower frequency, so the result is symmetric in (f, g).
  const ModeExtent& lo = (ef.lambda_max < eg.lambda_max || (ef.lambda_max == eg.lambda_max && ef.kmax <= eg.kmax))
                             ? ef
                             : eg;
  const double Y = std::sqrt(2.0 * static_cast<double>(lo.kmax) + 1.0) + 7.0;
  const double h = product_spacing({ef.kmax, eg.kmax, ef.kmax, eg.kmax});
  const auto Ny = static_cast<std::size_t>(std::ceil(2.0 * Y / h)) + 1;
  const std::size_t Mx = torus_points(f.spec(), 2 * (ef.jmax + eg.jmax));
  const std::size_t kmax = std::min(f.spec().K(), std::max(ef.kmax, eg.kmax) + 1);
  SampleGrid grid(f.spec(), kmax, Mx, -Y, Y, Ny);

  std::vector<Component> comps{Component::value};
  if (with_h1) comps.insert(comps.end(), {Component::dx, Component::dy});

  BilinearProfile out;
  out.l2.resize(frames);
  if (with_h1) out.h1.resize(frames);
  for (std::size_t n = 0; n < frames; ++n) {
    const double t = T * static_cast<double>(n) / static_cast<double>(frames - 1);
    auto a = grid.evaluate(f, t, comps);
    auto b = grid.evaluate(g, t, comps);
    double l2 = 0, h1 = 0;
    for (std::size_t i = 0; i < Ny; ++i) {
      const double y2 = grid.y(i) * grid.y(i);
      double rl = 0, rh = 0;
      for (std::size_t m = 0; m < Mx; ++m) {
        const std::size_t p = i * Mx + m;
        cplx w = a[0][p] * b[0][p];
        double w2 = std::norm(w);
        rl += w2;
        if (with_h1) {
          cplx wx = a[1][p] * b[0][p] + a[0][p] * b[1][p];
          cplx wy = a[2][p] * b[0][p] + a[0][p] * b[2][p];
          rh += std::norm(wx) + std::norm(wy) + y2 * w2;
        }
      }
      l2 += grid.weight(i) * rl;
      h1 += grid.weight(i) * rh;
    }
    out.l2[n] = l2;
    if (with_h1) out.h1[n] = h1;
  }
  return out;
}

namespace {

BourgainPair bourgain_from_profile(const std::vector<double>& prof, double nf1, double nf2, std::span<const cplx> g1,
                                   std::span<const cplx> g2, double T, double b) {
  const std::size_t F = prof.size();
  if (g1.size() != F || g2.size() != F) throw ShapeError("bilinear_bourgain: envelope length differs from frames");
  if (F < 16) throw ResolutionError("bilinear_bourgain: at least 16 frames required");
  const double dt = T / static_cast<double>(F - 1);
  std::vector<double> integrand(F);
  std::vector<cplx> w1(F), w2(F);
  for (std::size_t n = 0; n < F; ++n) {
    const double chi = time_window(dt * static_cast<double>(n), 0.0, T);
    w1[n] = chi * g1[n];
    w2[n] = chi * g2[n];
    integrand[n] = std::norm(w1[n] * w2[n]) * prof[n];
  }
  BourgainPair r;
  r.lhs = std::sqrt(trapezoid(integrand, dt));
  r.norm_u = time_sobolev_norm(w1, 0.0, dt, b) * nf1;
  r.norm_v = time_sobolev_norm(w2, 0.0, dt, b) * nf2;
  if (!(r.norm_u > 0) || !(r.norm_v > 0)) throw EmptySample("bilinear_bourgain: zero X^{0,b} norm");
  return r;
}

}  // namespace

BourgainPair bilinear_bourgain_sample(const SpectralField& f1, const SpectralField& f2, std::span<const cplx> g1,
                                      std::span<const cplx> g2, double T, double b) {
  if (l2_norm(f1) == 0 || l2_norm(f2) == 0) throw EmptySample("bilinear_bourgain: zero factor");
  auto prof = bilinear_profile(f1, f2, T, g1.size(), false);
  return bourgain_from_profile(prof.l2, l2_norm(f1), l2_norm(f2), g1, g2, T, b);
}

BilinearReports verify_bilinear(const BasisSpec& spec, const SweepPlan& plan, bool with_h1) {
  plan.validate();
  struct CellDef {
    int M, N;
  };
  std::vector<CellDef> defs;
  for (int M : plan.M)
    for (int N : plan.N) {
      if (M > N && !plan.diagnostic) throw InvalidArgument("bilinear: cells require M <= N");
      defs.push_back({M, N});
    }
  const std::size_t S = plan.samples, F = plan.frames();
  const double dt = plan.T / static_cast<double>(F - 1);

  struct Out {
    double l2, h1, blhs, bnorm;
  };
  std::vector<Out> res(defs.size() * S);
  parallel_for(res.size(), plan.threads, [&](std::size_t task) {
    const std::size_t c = task / S, s = task % S;
    auto rng = sample_rng(plan.seed, c, s);
    SpectralField f1 = random_block(spec, defs[c].N, rng);
    SpectralField f2 = random_block(spec, defs[c].M, rng);
    auto g1 = random_envelope(F, plan.T, rng);
    auto g2 = random_envelope(F, plan.T, rng);
    auto prof = bilinear_profile(f1, f2, plan.T, F, with_h1);
    auto bp = bourgain_from_profile(prof.l2, 1.0, 1.0, g1, g2, plan.T, plan.b);
    res[task] = {trapezoid(prof.l2, dt), with_h1 ? trapezoid(prof.h1, dt) : 0.0, bp.lhs, bp.norm_u * bp.norm_v};
  });

  BilinearReports out;
  out.l2.estimate = "bilinear-l2";
  out.h1.estimate = "bilinear-h1";
  out.bourgain.estimate = "bilinear-bourgain";
  for (auto* r : {&out.l2, &out.h1, &out.bourgain}) {
    r->config = {{"spec", detail::spec_json(spec)}, {"plan", plan.to_json()}};
  }
  const double d = plan.delta;
  for (std::size_t c = 0; c < defs.size(); ++c) {
    const double M = defs[c].M, N = defs[c].N;
    Cell l2, h1, bo;
    for (Cell* cell : {&l2, &h1, &bo}) cell->params = {{"M", defs[c].M}, {"N", defs[c].N}};
    for (std::size_t s = 0; s < S; ++s) {
      const Out& o = res[c * S + s];
      l2.values.push_back(o.l2);
      l2.ratios.push_back(o.l2 / (M / N));
      h1.values.push_back(o.h1);
      h1.ratios.push_back(o.h1 / (M * N));
      double u = o.blhs / o.bnorm;
      bo.values.push_back(u);
      bo.ratios.push_back(u / (std::pow(M, d) * std::pow(M / N, 0.5 - d)));
    }
    for (Cell* cell : {&l2, &h1, &bo}) {
      for (double v : cell->values) cell->log_values.push_back(std::log(v));
      cell->summarize();
    }
    out.l2.cells.push_back(std::move(l2));
    out.h1.cells.push_back(std::move(h1));
    out.bourgain.cells.push_back(std::move(bo));
  }

  struct Expect {
    EstimateReport* r;
    double n_slope, n_tol, m_slope, m_tol;
  };
  std::vector<Expect> ex{{&out.l2, -1.0, 0.3, 1.0, 0.3}, {&out.bourgain, -(0.5 - d), 0.2, 0.5, 0.2}};
  if (with_h1) ex.push_back({&out.h1, 1.0, 0.3, 1.0, 0.3});
  for (auto& e : ex) {
    for (int M : plan.M) {
      std::vector<double> xs, ys;
      for (std::size_t c = 0; c < defs.size(); ++c)
        if (defs[c].M == M && defs[c].M <= defs[c].N) {
          xs.push_back(defs[c].N);
          ys.push_back(e.r->cells[c].log_mean_value);
        }
      if (xs.size() >= 2)
        e.r->fits.push_back(make_fit("N-slope at M=" + std::to_string(M), "N", xs, ys, e.n_slope, e.n_tol));
    }
    for (int N : plan.N) {
      std::vector<double> xs, ys;
      for (std::size_t c = 0; c < defs.size(); ++c)
        if (defs[c].N == N && defs[c].M <= defs[c].N) {
          xs.push_back(defs[c].M);
          ys.push_back(e.r->cells[c].log_mean_value);
        }
      if (xs.size() >= 2)
        e.r->fits.push_back(make_fit("M-slope at N=" + std::to_string(N), "M", xs, ys, e.m_slope, e.m_tol));
    }
  }
  if (!with_h1) out.h1.note = "not computed";
  for (auto* r : {&out.l2, &out.h1, &out.bourgain}) r->finalize();
  if (!with_h1) out.h1.verdict = Verdict::inconclusive;
  return out;
}

EstimateReport verify_bilinear_l2(const BasisSpec& spec, const SweepPlan& plan) {
  return verify_bilinear(spec, plan, false).l2;
}
EstimateReport verify_bilinear_h1(const BasisSpec& spec, const SweepPlan& plan) {
  return verify_bilinear(spec, plan, true).h1;
}
EstimateReport verify_bilinear_bourgain(const BasisSpec& spec, const SweepPlan& plan) {
  return verify_bilinear(spec, plan, false).bourgain;
}

}  // namespace phnls
