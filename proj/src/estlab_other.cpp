#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "estlab_detail.hpp"
#include "phnls/parallel.hpp"
#include "phnls/bourgain.hpp"
#include "phnls/error.hpp"
#include "phnls/estlab.hpp"
#include "phnls/evolve.hpp"
#include "phnls/hermite.hpp"
#include "phnls/sampling.hpp"

namespace phnls {

using detail::product_spacing;
using detail::torus_points;

// ---- almost orthogonality -----------------------------------------------------

namespace {

using lcplx = std::complex<long double>;

// Populated columns of f as (j, coefficient row).
std::vector<std::pair<int, std::vector<cplx>>> columns(const SpectralField& f, std::size_t kcap) {
  std::vector<std::pair<int, std::vector<cplx>>> out;
  const auto& sp = f.spec();
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj) {
    std::vector<cplx> row(kcap);
    bool any = false;
    for (std::size_t k = 0; k < sp.K(); ++k)
      if (f(jj, k) != cplx{}) {
        if (k >= kcap) throw ShapeError("quadruple_pairing: low-frequency factor exceeds its Hermite range");
        row[k] = f(jj, k);
        any = true;
      }
    if (any) out.emplace_back(sp.j_of(jj), std::move(row));
  }
  return out;
}

}  // namespace

Pairing quadruple_pairing(const SpectralField& f0, const SpectralField& f1, const SpectralField& f2,
                          const SpectralField& f3) {
  const BasisSpec& sp = f0.spec();
  for (const auto* f : {&f1, &f2, &f3})
    if (!(f->spec() == sp)) throw ShapeError("quadruple_pairing: factors on different bases");
  const SpectralField* low[3] = {&f1, &f2, &f3};
  std::size_t kc[3];
  std::size_t D = 0;
  for (int i = 0; i < 3; ++i) {
    kc[i] = std::max<std::size_t>(mode_extent(*low[i]).kmax, 1);
    D += kc[i] - 1;
  }
  // G_J(y) = Σ_{j1+j2+j3=J} Π_i Σ_k c_i(j_i,k) h_k(y) is e^{-3y²/2} times a polynomial of
  // degree <= D, expanded exactly in the dilated functions 3^{1/4} h_m(√3 y), m <= D.
  const QuadratureRule rule = gauss_hermite_nodes(D + 8);
  const std::size_t nq = rule.size();
  const double r3 = std::sqrt(3.0);
  std::vector<double> hs(nq * (D + 1));  // h_m(s_q)
  std::vector<std::vector<double>> hy(nq);  // h_k(s_q/√3)
  std::size_t kall = std::max({kc[0], kc[1], kc[2]});
  for (std::size_t q = 0; q < nq; ++q) {
    hermite_eval_all(rule.nodes[q], D + 1, hs.data() + q * (D + 1));
    hy[q].resize(kall);
    hermite_eval_all(rule.nodes[q] / r3, kall, hy[q].data());
  }
  std::vector<std::vector<std::pair<int, std::vector<cplx>>>> cols;
  for (int i = 0; i < 3; ++i) cols.push_back(columns(*low[i], kc[i]));

  // Values of each factor column at the nodes, then G_J at the nodes.
  auto values = [&](int i) {
    std::vector<std::vector<cplx>> v;
    for (const auto& [j, row] : cols[i]) {
      std::vector<cplx> w(nq);
      for (std::size_t q = 0; q < nq; ++q) {
        cplx s{};
        for (std::size_t k = 0; k < row.size(); ++k) s += row[k] * hy[q][k];
        w[q] = s;
      }
      v.push_back(std::move(w));
    }
    return v;
  };
  auto v1 = values(0), v2 = values(1), v3 = values(2);
  std::map<int, std::vector<cplx>> G;
  for (std::size_t a = 0; a < v1.size(); ++a)
    for (std::size_t b = 0; b < v2.size(); ++b)
      for (std::size_t c = 0; c < v3.size(); ++c) {
        int J = cols[0][a].first + cols[1][b].first + cols[2][c].first;
        auto& g = G[J];
        g.resize(nq);
        for (std::size_t q = 0; q < nq; ++q) g[q] += v1[a][q] * v2[b][q] * v3[c][q];
      }

  const long double a3 = std::sqrt(3.0L);
  const int half = static_cast<int>(sp.Nx() / 2);
  lcplx total{};
  for (const auto& [J, g] : G) {
    int j0 = -J;
    if (j0 < -half || j0 >= half) continue;
    const auto jj = static_cast<std::size_t>(j0 + half);
    // γ_m = ∫ G_J(y) 3^{1/4} h_m(√3 y) dy = 3^{-1/4} Σ_q W_q G_J(s_q/√3) h_m(s_q)
    std::vector<lcplx> gamma(D + 1);
    for (std::size_t m = 0; m <= D; ++m) {
      cplx s{};
      for (std::size_t q = 0; q < nq; ++q) s += rule.scaled_weights[q] * g[q] * hs[q * (D + 1) + m];
      gamma[m] = lcplx(s.real(), s.imag()) / std::pow(3.0L, 0.25L);
    }
    for (std::size_t k0 = 0; k0 < sp.K(); ++k0) {
      cplx c0 = f0(jj, k0);
      if (c0 == cplx{}) continue;
      lcplx acc{};
      for (std::size_t m = k0 % 2; m <= D; m += 2)
        acc += gamma[m] * std::pow(3.0L, 0.25L) *
               hermite_dilation_overlap(static_cast<int>(k0), static_cast<int>(m), a3);
      total += lcplx(c0.real(), c0.imag()) * acc;
    }
  }
  Pairing p;
  p.value = total / static_cast<long double>(2.0 * sp.Lx());
  long double mag = std::abs(p.value);
  p.log_abs = mag > 0 ? static_cast<double>(std::log(mag)) : -std::numeric_limits<double>::infinity();
  return p;
}

cplx quadruple_pairing_grid(const SpectralField& f0, const SpectralField& f1, const SpectralField& f2,
                            const SpectralField& f3) {
  const SpectralField* fs[4] = {&f0, &f1, &f2, &f3};
  ModeExtent e[4];
  std::size_t klow = 1, kall = 1;
  int deg = 0;
  for (int i = 0; i < 4; ++i) {
    if (!(fs[i]->spec() == f0.spec())) throw ShapeError("quadruple_pairing_grid: factors on different bases");
    e[i] = mode_extent(*fs[i]);
    if (e[i].kmax == 0) return {};
    kall = std::max(kall, e[i].kmax);
    if (i > 0) klow = std::max(klow, e[i].kmax);
    deg += e[i].jmax;
  }
  const double Y = std::sqrt(2.0 * static_cast<double>(klow) + 1.0) + 7.0;
  const double h = product_spacing({e[0].kmax, e[1].kmax, e[2].kmax, e[3].kmax});
  const auto Ny = static_cast<std::size_t>(std::ceil(2.0 * Y / h)) + 1;
  const std::size_t Mx = torus_points(f0.spec(), deg);
  SampleGrid grid(f0.spec(), std::min(kall + 1, f0.spec().K()), Mx, -Y, Y, Ny);
  std::vector<std::vector<cplx>> u;
  for (auto* f : fs) u.push_back(grid.evaluate(*f));
  std::vector<cplx> prod(u[0].size());
  for (std::size_t p = 0; p < prod.size(); ++p) prod[p] = u[0][p] * u[1][p] * u[2][p] * u[3][p];
  return grid.integrate(prod);
}

EstimateReport verify_almost_orthogonality(const BasisSpec& spec, const SweepPlan& plan) {
  plan.validate();
  const int lmax = *std::max_element(plan.lambda_low.begin(), plan.lambda_low.end());
  for (int l0 : plan.lambda0)
    if (l0 < 8 * lmax && !plan.diagnostic)
      throw InvalidArgument("almost-orth: requires lambda0 >= 8 max(lambda1, lambda2, lambda3)");
  if (plan.lambda0.empty()) throw InvalidArgument("almost-orth: empty lambda0 set");

  struct CellDef {
    int l0;
    bool xdom;
  };
  std::vector<CellDef> defs;
  for (int l0 : plan.lambda0) defs.push_back({l0, false});
  for (int l0 : plan.lambda0) defs.push_back({l0, true});
  const std::size_t S = plan.samples;
  std::vector<double> val(defs.size() * S), logv(defs.size() * S);
  parallel_for(val.size(), plan.threads, [&](std::size_t task) {
    const std::size_t c = task / S, s = task % S;
    auto rng = sample_rng(plan.seed, c, s);
    auto part = defs[c].xdom ? ShellPart::x_dominated : ShellPart::hermite_dominated;
    SpectralField f0 = random_shell(spec, defs[c].l0, part, rng);
    SpectralField f1 = random_shell(spec, plan.lambda_low[0], ShellPart::any, rng);
    SpectralField f2 = random_shell(spec, plan.lambda_low[1], ShellPart::any, rng);
    SpectralField f3 = random_shell(spec, plan.lambda_low[2], ShellPart::any, rng);
    if (defs[c].xdom) {
      double v = std::abs(quadruple_pairing_grid(f0, f1, f2, f3));
      val[task] = v;
      logv[task] = v > 0 ? std::log(v) : -std::numeric_limits<double>::infinity();
    } else {
      Pairing p = quadruple_pairing(f0, f1, f2, f3);
      val[task] = static_cast<double>(std::abs(p.value));
      logv[task] = p.log_abs;
    }
  });

  EstimateReport r;
  r.estimate = "almost-orth";
  r.config = {{"spec", detail::spec_json(spec)}, {"plan", plan.to_json()}, {"C0", 8}};
  std::vector<double> xs, ys;
  double xmax = 0;
  for (std::size_t c = 0; c < defs.size(); ++c) {
    Cell cell;
    cell.params = {{"lambda0", defs[c].l0},
                   {"lambda1", plan.lambda_low[0]},
                   {"lambda2", plan.lambda_low[1]},
                   {"lambda3", plan.lambda_low[2]},
                   {"x_dominated", defs[c].xdom ? 1 : 0}};
    for (std::size_t s = 0; s < S; ++s) {
      cell.values.push_back(val[c * S + s]);
      cell.log_values.push_back(logv[c * S + s]);
      cell.ratios.push_back(val[c * S + s]);  // unit inputs
    }
    cell.summarize();
    if (defs[c].xdom) {
      xmax = std::max(xmax, cell.max_value);
    } else if (defs[c].l0 >= 8 * lmax) {
      xs.push_back(defs[c].l0);
      ys.push_back(cell.log_mean_value);
    }
    r.cells.push_back(std::move(cell));
  }
  if (xs.size() >= 2) r.fits.push_back(make_fit("decay in lambda0", "lambda0", xs, ys, -8.0, 0.0, true));
  r.checks.push_back({"x-dominated pairing magnitude", xmax, 1e-12, xmax <= 1e-12});
  r.finalize();
  return r;
}

// ---- Bernstein ----------------------------------------------------------------

namespace {

double lp_norm_grid(const SampleGrid& g, const std::vector<cplx>& u, double p) {
  std::vector<double> a(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) a[i] = std::pow(std::abs(u[i]), p);
  return std::pow(g.integrate(a), 1.0 / p);
}

}  // namespace

EstimateReport verify_bernstein(const BasisSpec& spec, int p, int q, int s, const SweepPlan& plan) {
  plan.validate();
  auto ok = [](int v) { return v == 2 || v == 4 || v == 8; };
  if (!ok(p) || !ok(q) || p > q) throw InvalidArgument("bernstein: need p <= q with p, q in {2, 4, 8}");
  if (s < 0 || s > 2) throw InvalidArgument("bernstein: s must be 0, 1 or 2");
  const double expo = s + 2.0 / p - 2.0 / q;
  const std::size_t S = plan.samples;
  std::vector<double> val(plan.N.size() * S);
  parallel_for(val.size(), plan.threads, [&](std::size_t task) {
    const std::size_t c = task / S, smp = task % S;
    const int N = plan.N[c];
    auto rng = sample_rng(plan.seed, c, smp);
    std::uniform_real_distribution<double> ux(-spec.Lx(), spec.Lx()), uy(-1.0, 1.0);
    const double x0 = ux(rng), y0 = uy(rng);
    SpectralField u = wavepacket(spec, N, x0, y0);
    SpectralField v = apply_multiplier(u, Multiplier::sobolev(s) * Multiplier::lp_smooth(N));
    const ModeExtent e = mode_extent(u);
    // The packet decays on the scale 1/N around y0.
    const double Y = 3.0 + 48.0 / N;
    const int big = std::max(p, q);
    const double h = product_spacing(e.kmax, static_cast<std::size_t>(big));
    const auto Ny = static_cast<std::size_t>(std::ceil(2.0 * Y / h)) + 1;
    const std::size_t Mx = torus_points(spec, big * e.jmax);
    std::unique_ptr<SampleGrid> grid;
    auto get_grid = [&]() -> const SampleGrid& {
      if (!grid) grid = std::make_unique<SampleGrid>(spec, std::min(e.kmax + 1, spec.K()), Mx, y0 - Y, y0 + Y, Ny);
      return *grid;
    };
    double num = q == 2 ? l2_norm(v) : lp_norm_grid(get_grid(), get_grid().evaluate(v), q);
    double den = p == 2 ? l2_norm(u) : lp_norm_grid(get_grid(), get_grid().evaluate(u), p);
    val[task] = num / den;
  });

  EstimateReport r;
  r.estimate = "bernstein";
  r.config = {{"spec", detail::spec_json(spec)}, {"plan", plan.to_json()}, {"p", p}, {"q", q}, {"s", s}};
  std::vector<double> xs, ys;
  for (std::size_t c = 0; c < plan.N.size(); ++c) {
    Cell cell;
    const int N = plan.N[c];
    cell.params = {{"N", N}, {"p", p}, {"q", q}, {"s", s}};
    for (std::size_t k = 0; k < S; ++k) {
      double v = val[c * S + k];
      cell.values.push_back(v);
      cell.log_values.push_back(std::log(v));
      cell.ratios.push_back(v / std::pow(static_cast<double>(N), expo));
    }
    cell.summarize();
    xs.push_back(N);
    ys.push_back(cell.log_mean_value);
    r.cells.push_back(std::move(cell));
  }
  if (xs.size() >= 2) {
    double tol = (p == q && s == 0) ? 0.1 : 0.15;
    r.fits.push_back(make_fit("N-slope", "N", xs, ys, expo, tol));
  }
  r.finalize();
  return r;
}

// ---- Strichartz ---------------------------------------------------------------

double strichartz_norm(const SpectralField& phi, double q, double r, double T, std::size_t frames) {
  if (!strichartz_admissible(q, r)) throw InvalidArgument("strichartz: (q, r) is not admissible");
  if (frames < 2) throw InvalidArgument("strichartz: need at least two frames");
  const ModeExtent e = mode_extent(phi);
  if (e.kmax == 0) return 0.0;
  const double dt = T / static_cast<double>(frames - 1);
  std::vector<double> per(frames);
  if (r == 2) {
    std::fill(per.begin(), per.end(), l2_norm(phi));
  } else {
    // |u|^r carries e^{-r y²/2}; the rescaled rule is exact for even integer r.
    const int p = static_cast<int>(std::ceil(r));
    const SampleGrid grid = SampleGrid::gaussian(phi.spec(), e.kmax, torus_points(phi.spec(), p * e.jmax), p);
    std::vector<double> a(grid.Ny() * grid.Mx());
    for (std::size_t n = 0; n < frames; ++n) {
      auto u = grid.evaluate(phi, dt * static_cast<double>(n));
      for (std::size_t i = 0; i < u.size(); ++i) a[i] = std::pow(std::abs(u[i]), r);
      per[n] = std::pow(grid.integrate(a), 1.0 / r);
    }
  }
  if (std::isinf(q)) return *std::max_element(per.begin(), per.end());
  for (auto& v : per) v = std::pow(v, q);
  return std::pow(trapezoid(per, dt), 1.0 / q);
}

namespace {

BasisSpec doubled(const BasisSpec& sp) {
  std::size_t nodes = sp.hermite().nodes() == 2 * sp.K() ? 0 : 2 * sp.hermite().nodes();
  return BasisSpec(sp.Lx(), 2 * sp.Nx(), 2 * sp.K(), nodes);
}

// Data band shared by both resolutions: half of the base basis in each direction.
int band_j(const BasisSpec& base) { return static_cast<int>(base.Nx() / 4); }
std::size_t band_k(const BasisSpec& base) { return std::max<std::size_t>(base.K() / 2, 1); }

Check stability_check(const std::string& name, double a, double b) {
  double f = (a > 0 && b > 0) ? std::max(a / b, b / a) : std::numeric_limits<double>::infinity();
  return {name, f, 2.0, f < 2.0};
}

}  // namespace

EstimateReport verify_strichartz(const BasisSpec& spec, double q, double r, const SweepPlan& plan) {
  if (!strichartz_admissible(q, r))
    throw InvalidArgument("strichartz: (q, r) must satisfy 1/q = 1/2 - 1/r with 2 <= r < inf");
  plan.validate();
  const BasisSpec specs[2] = {spec, doubled(spec)};
  const std::size_t F[2] = {plan.frames(), 2 * plan.frames() - 1};
  const std::size_t S = plan.samples;
  std::vector<double> val(2 * S);
  parallel_for(val.size(), plan.threads, [&](std::size_t task) {
    const std::size_t c = task / S, s = task % S;
    auto rng = sample_rng(plan.seed, 0, s);  // same data at both resolutions
    SpectralField phi = random_band(specs[c], band_j(spec), band_k(spec), rng);
    val[task] = strichartz_norm(phi, q, r, plan.T, F[c]);
  });
  EstimateReport rep;
  rep.estimate = "strichartz";
  rep.config = {{"spec", detail::spec_json(spec)}, {"plan", plan.to_json()}, {"q", std::isinf(q) ? -1.0 : q},
                {"r", r}, {"band_j", band_j(spec)}, {"band_k", band_k(spec)}};
  for (int c = 0; c < 2; ++c) {
    Cell cell;
    cell.params = {{"resolution", c + 1}, {"Nx", specs[c].Nx()}, {"K", specs[c].K()}, {"frames", F[c]}};
    for (std::size_t s = 0; s < S; ++s) {
      double v = val[c * S + s];
      cell.values.push_back(v);
      cell.log_values.push_back(std::log(v));
      cell.ratios.push_back(v);  // unit data
    }
    cell.summarize();
    rep.cells.push_back(std::move(cell));
  }
  rep.checks.push_back(stability_check("max ratio change under doubling", rep.cells[0].max_ratio, rep.cells[1].max_ratio));
  rep.finalize();
  return rep;
}

// ---- trilinear ----------------------------------------------------------------

TrilinearSample trilinear_sample(std::span<const SpectralField> phi, std::span<const std::vector<cplx>> env, double T,
                                 const SweepPlan& plan) {
  if (phi.size() != 4 || env.size() != 4) throw ShapeError("trilinear_sample: need four fields and envelopes");
  const BasisSpec& sp = phi[0].spec();
  const std::size_t F = env[0].size();
  for (int i = 0; i < 4; ++i) {
    if (!(phi[i].spec() == sp)) throw ShapeError("trilinear_sample: fields on different bases");
    if (env[i].size() != F) throw ShapeError("trilinear_sample: envelopes differ in length");
  }
  if (F < 16) throw ResolutionError("trilinear_sample: at least 16 frames required");
  const double dt = T / static_cast<double>(F - 1);
  std::size_t kmax = 1;
  int deg = 0;
  for (int i = 0; i < 4; ++i) {
    ModeExtent e = mode_extent(phi[i]);
    kmax = std::max(kmax, e.kmax);
    deg += e.jmax;
  }
  const SampleGrid grid = SampleGrid::gaussian(sp, kmax, torus_points(sp, deg), 4);
  std::vector<cplx> w[4];
  for (auto& v : w) v.resize(F);
  std::vector<double> re(F), im(F);
  std::vector<cplx> prod(grid.Ny() * grid.Mx());
  for (std::size_t n = 0; n < F; ++n) {
    const double t = dt * static_cast<double>(n);
    const double chi = time_window(t, 0.0, T);
    for (int i = 0; i < 4; ++i) w[i][n] = chi * env[i][n];
    if (chi == 0.0) continue;
    std::vector<cplx> x[4];
    for (int i = 0; i < 4; ++i) x[i] = grid.evaluate(phi[i], t);
    for (std::size_t p = 0; p < prod.size(); ++p) prod[p] = x[1][p] * x[2][p] * std::conj(x[3][p] * x[0][p]);
    cplx v = grid.integrate(prod) * w[1][n] * w[2][n] * std::conj(w[3][n] * w[0][n]);
    re[n] = v.real();
    im[n] = v.imag();
  }
  TrilinearSample out;
  out.pairing = {trapezoid(re, dt), trapezoid(im, dt)};
  out.norms[0] = time_sobolev_norm(w[0], 0.0, dt, plan.b_prime) * sobolev_norm(phi[0], -plan.s);
  out.norms[1] = time_sobolev_norm(w[1], 0.0, dt, plan.b_embed) * sobolev_norm(phi[1], plan.s);
  out.norms[2] = time_sobolev_norm(w[2], 0.0, dt, plan.b_embed) * sobolev_norm(phi[2], plan.eps);
  out.norms[3] = time_sobolev_norm(w[3], 0.0, dt, plan.b_embed) * sobolev_norm(phi[3], plan.eps);
  return out;
}

EstimateReport verify_trilinear(const BasisSpec& spec, const SweepPlan& plan) {
  plan.validate();
  if (!(plan.b_prime < 0.5 && plan.b_embed > 0.5 && plan.b_embed + plan.b_prime < 1.0))
    throw InvalidArgument("trilinear: requires 0 < b' < 1/2 < b and b + b' < 1");
  const BasisSpec specs[2] = {spec, doubled(spec)};
  const std::size_t F[2] = {plan.frames(), 2 * plan.frames() - 1};
  const std::size_t S = plan.samples;
  std::vector<double> val(2 * S), pair(2 * S);
  parallel_for(val.size(), plan.threads, [&](std::size_t task) {
    const std::size_t c = task / S, s = task % S;
    auto rng = sample_rng(plan.seed, 0, s);
    std::vector<SpectralField> phi;
    std::vector<std::vector<cplx>> env;
    for (int i = 0; i < 4; ++i) phi.push_back(random_band(specs[c], band_j(spec), band_k(spec), rng));
    for (int i = 0; i < 4; ++i) env.push_back(random_envelope(F[c], plan.T, rng));
    auto ts = trilinear_sample(phi, env, plan.T, plan);
    double den = ts.norms[0] * ts.norms[1] * ts.norms[2] * ts.norms[3];
    if (!(den > 0)) throw EmptySample("trilinear: zero norm");
    pair[task] = std::abs(ts.pairing);
    val[task] = pair[task] / den;
  });
  EstimateReport rep;
  rep.estimate = "trilinear";
  rep.config = {{"spec", detail::spec_json(spec)}, {"plan", plan.to_json()}, {"band_j", band_j(spec)},
                {"band_k", band_k(spec)}};
  for (int c = 0; c < 2; ++c) {
    Cell cell;
    cell.params = {{"resolution", c + 1}, {"Nx", specs[c].Nx()}, {"K", specs[c].K()}, {"frames", F[c]}};
    for (std::size_t s = 0; s < S; ++s) {
      cell.values.push_back(pair[c * S + s]);
      cell.log_values.push_back(std::log(pair[c * S + s]));
      cell.ratios.push_back(val[c * S + s]);
    }
    cell.summarize();
    rep.cells.push_back(std::move(cell));
  }
  rep.checks.push_back(stability_check("max ratio change under doubling", rep.cells[0].max_ratio, rep.cells[1].max_ratio));
  rep.finalize();
  return rep;
}

}  // namespace phnls
