#include "phnls/growth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "estlab_detail.hpp"
#include "phnls/config.hpp"
#include "phnls/error.hpp"
#include "phnls/sampling.hpp"

namespace phnls {

using nlohmann::json;

double japanese_bracket(double t) { return std::sqrt(1.0 + t * t); }

// ---------------------------------------------------------------------------
// norm tracking

GrowthReport track_growth(const SimConfig& config, int k, double horizon, std::size_t stride) {
  return track_growth(config, make_initial(config.initial, config.spec, config.seed), k, horizon, stride);
}

GrowthReport track_growth(const SimConfig& config, const SpectralField& initial, int k, double horizon,
                          std::size_t stride) {
  if (k != 1 && k != 2) throw InvalidArgument("track_growth: k must be 1 or 2");
  if (!(horizon > 0)) throw InvalidArgument("track_growth: horizon must be positive");
  if (stride == 0) throw InvalidArgument("track_growth: stride must be positive");

  GrowthReport r;
  r.k = k;
  r.horizon = horizon;
  r.stride = stride;
  r.config = config;
  r.config.t_end = horizon;
  r.config.output_stride = stride;
  r.config.keep_frames = false;
  r.bound = 2.0 / 3.0 * (2.0 * k - 1.0);

  const SimulationResult sim = simulate(r.config, initial);
  for (const Observables& o : sim.series) {
    r.t.push_back(o.t);
    r.norm.push_back(k == 1 ? o.h2 : o.h4);
    r.h1.push_back(o.h1);
    r.mass.push_back(o.mass);
    r.energy.push_back(o.energy);
  }

  std::vector<double> xs, ys;
  for (std::size_t n = 0; n < r.t.size(); ++n) {
    if (r.t[n] < 0.5 * horizon) continue;
    if (!(r.norm[n] > 0)) throw EmptySample("track_growth: vanishing H^{2k} norm");
    xs.push_back(std::log(japanese_bracket(r.t[n])));
    ys.push_back(std::log(r.norm[n]));
  }
  if (xs.size() < 3) throw InvalidArgument("track_growth: stride leaves fewer than 3 frames in the fitted half");
  r.fit = fit_line(xs, ys);
  r.alpha = r.fit.slope;
  r.alpha_lo = r.alpha - 1.96 * r.fit.slope_stderr;
  r.alpha_hi = r.alpha + 1.96 * r.fit.slope_stderr;

  const auto [lo, hi] = std::minmax_element(r.h1.begin(), r.h1.end());
  r.h1_ratio = *hi / *lo;
  for (std::size_t n = 0; n < r.t.size(); ++n) {
    r.mass_drift = std::max(r.mass_drift, std::abs(r.mass[n] - r.mass[0]) / r.mass[0]);
    r.energy_drift = std::max(r.energy_drift, std::abs(r.energy[n] - r.energy[0]) / std::abs(r.energy[0]));
  }
  if (!(r.h1_ratio < kH1RatioLimit)) {
    std::ostringstream msg;
    msg << "track_growth: H1 norm max/min = " << r.h1_ratio << " exceeds " << kH1RatioLimit
        << "; the bounded-H1 assumption does not hold for this run";
    throw AssumptionViolated(msg.str());
  }
  r.verdict = std::isfinite(r.alpha) && r.alpha <= r.bound + r.tolerance ? Verdict::pass : Verdict::fail;
  return r;
}

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json GrowthReport::to_json() const {
  json j;
  j["kind"] = "growth";
  j["version"] = PHNLS_VERSION;
  j["config"] = phnls::to_json(config);
  j["k"] = k;
  j["tracked_norm"] = "H" + std::to_string(2 * k);
  j["horizon"] = horizon;
  j["stride"] = stride;
  j["fit"] = {{"fit_on", "log norm vs log <t>, t >= horizon/2"},
              {"alpha", num(alpha)},
              {"alpha_lo", num(alpha_lo)},
              {"alpha_hi", num(alpha_hi)},
              {"intercept", num(fit.intercept)},
              {"r2", num(fit.r2)},
              {"residual", num(fit.residual)},
              {"slope_stderr", num(fit.slope_stderr)},
              {"points", fit.points}};
  j["bound"] = bound;
  j["tolerance"] = tolerance;
  j["h1_ratio"] = num(h1_ratio);
  j["h1_ratio_limit"] = kH1RatioLimit;
  j["mass_drift"] = num(mass_drift);
  j["energy_drift"] = num(energy_drift);
  j["verdict"] = to_string(verdict);
  j["series"] = {{"t", t}, {"norm", norm}, {"h1", h1}, {"mass", mass}, {"energy", energy}};
  return j;
}

std::string GrowthReport::to_csv() const {
  std::ostringstream o;
  o << "t,h" << 2 * k << ",h1,mass,energy\n";
  for (std::size_t n = 0; n < t.size(); ++n)
    o << format_double(t[n]) << ',' << format_double(norm[n]) << ',' << format_double(h1[n]) << ','
      << format_double(mass[n]) << ',' << format_double(energy[n]) << '\n';
  return o.str();
}

std::string GrowthReport::file_stem() const {
  return "growth_seed" + std::to_string(config.seed) + "_k" + std::to_string(k) + "_" +
         to_string(config.nonlinearity) + "_T" + format_double(horizon);
}

// ---------------------------------------------------------------------------
// comparability

std::pair<double, double> comparability_check(const SpectralField& u, int k, double s, double gamma) {
  if (k < 1 || k > 2) throw Unsupported("comparability_check: k must be 1 or 2");
  if (s != 0.0 && s != 1.0 && s != 2.0) throw InvalidArgument("comparability_check: s must be 0, 1 or 2");
  const TimeDerivatives D = time_derivatives(u, k, gamma);
  SpectralField free = apply_multiplier(u, Multiplier::sobolev(2.0 * k));
  free *= k == 1 ? cplx(0.0, 1.0) : cplx(-1.0, 0.0);
  return {sobolev_norm(D.d[static_cast<std::size_t>(k)] - free, s), sobolev_norm(u, s + 2.0 * k - 1.0)};
}

// ---------------------------------------------------------------------------
// modified-energy integrands

void EnergyTermSpec::validate() const {
  if (k < 0) throw InvalidArgument("EnergyTermSpec: k must be non-negative");
  for (int o : orders)
    if (o < 0) throw InvalidArgument("EnergyTermSpec: negative derivative order");
  const int sum = orders[0] + orders[1] + orders[2];
  if (type == Type::S && sum != k) throw InvalidArgument("EnergyTermSpec: S-type orders must sum to k");
  if (type == Type::R && (sum != k + 1 || orders[0] > k))
    throw InvalidArgument("EnergyTermSpec: R-type orders must sum to k+1 with n1 <= k");
  if (std::max({k, orders[0], orders[1], orders[2]}) > 4)
    throw Unsupported("EnergyTermSpec: time-derivative order above 4 is not supported");
}

cplx modified_energy_term(const SpectralField& u, const EnergyTermSpec& term, double gamma) {
  term.validate();
  const std::array<int, 4> order{term.k, term.orders[0], term.orders[1], term.orders[2]};
  const int top = *std::max_element(order.begin(), order.end());
  const TimeDerivatives D = time_derivatives(u, top, gamma);

  std::size_t kmax = 1;
  int jmax = 0;
  for (int o : order) {
    ModeExtent e = mode_extent(D.d[static_cast<std::size_t>(o)]);
    kmax = std::max(kmax, e.kmax);
    jmax = std::max(jmax, e.jmax);
  }
  if (kmax == 0) return 0.0;
  // Gauss-Hermite for the weight e^{-2y²}; the extra nodes absorb the degree added by ∂y or ⟨y⟩².
  const std::size_t n = 2 * (kmax - 1) + 3;
  QuadratureRule rule = gauss_hermite_nodes(n);
  std::vector<double> y(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = rule.nodes[i] / std::sqrt(2.0);
    w[i] = rule.scaled_weights[i] / std::sqrt(2.0);
  }
  const std::size_t Mx = detail::torus_points(u.spec(), 4 * jmax);
  SampleGrid grid(u.spec(), std::min(kmax, u.spec().K()), Mx, std::move(y), std::move(w));

  using Op = EnergyTermSpec::Op;
  Component comp = term.L == Op::dx ? Component::dx : term.L == Op::dy ? Component::dy : Component::value;
  std::array<std::vector<cplx>, 4> f;
  for (std::size_t i = 0; i < 4; ++i) {
    f[i] = grid.evaluate(D.d[static_cast<std::size_t>(order[i])], 0.0, i < 2 ? comp : Component::value);
    if (term.conj[i])
      for (cplx& v : f[i]) v = std::conj(v);
  }
  std::vector<cplx> prod(f[0].size());
  for (std::size_t iy = 0; iy < grid.Ny(); ++iy) {
    const double wy = term.L == Op::bracket_y ? 1.0 + grid.y(iy) * grid.y(iy) : 1.0;
    for (std::size_t m = 0; m < Mx; ++m) {
      const std::size_t p = iy * Mx + m;
      prod[p] = wy * f[0][p] * f[1][p] * f[2][p] * f[3][p];
    }
  }
  return grid.integrate(prod);
}

// ---------------------------------------------------------------------------
// energy identity

namespace {

struct IdentitySides {
  double energy;  // ½‖A ∂ₜ^k u‖²
  double rhs;     // -γ Re ∫ ∂ₜ^k(|u|²u) conj(A ∂ₜ^{k+1} u)
};

IdentitySides identity_sides(const SpectralField& u, int k, double gamma) {
  const TimeDerivatives D = time_derivatives(u, k + 1, gamma, true);
  const Multiplier A = Multiplier::sobolev(2.0);
  const double e = 0.5 * std::pow(l2_norm(apply_multiplier(D.d[static_cast<std::size_t>(k)], A)), 2);
  double rhs = 0.0;
  if (gamma != 0.0)
    rhs = -gamma * inner(apply_multiplier(D.d[static_cast<std::size_t>(k) + 1], A), D.n[static_cast<std::size_t>(k)])
                       .real();
  return {e, rhs};
}

}  // namespace

EnergyIdentityCheck energy_derivative_check(const Trajectory& traj, int k, double gamma) {
  if (k != 0 && k != 1) throw InvalidArgument("energy_derivative_check: k must be 0 or 1");
  traj.validate();
  if (traj.size() < 3) throw InvalidArgument("energy_derivative_check: need at least three frames");
  if (!(traj.dt > 0) || traj.dt > 1e-2 * (1 + 1e-12))
    throw ResolutionError("energy_derivative_check: frame spacing must be positive and at most 1e-2");
  std::vector<IdentitySides> sides;
  sides.reserve(traj.size());
  for (const auto& f : traj.frames) sides.push_back(identity_sides(f, k, gamma));

  EnergyIdentityCheck out;
  for (std::size_t n = 1; n + 1 < traj.size(); ++n) {
    const double lhs = (sides[n + 1].energy - sides[n - 1].energy) / (2.0 * traj.dt);
    out.t.push_back(traj.time(n));
    out.lhs.push_back(lhs);
    out.rhs.push_back(sides[n].rhs);
    out.residual.push_back(lhs - sides[n].rhs);
    out.max_residual = std::max(out.max_residual, std::abs(lhs - sides[n].rhs));
    out.scale = std::max(out.scale, std::abs(sides[n].rhs));
  }
  return out;
}

double energy_identity_richardson(const Trajectory& traj, int k, double gamma) {
  if (traj.size() < 5) throw InvalidArgument("energy_identity_richardson: need at least five frames");
  Trajectory coarse;
  coarse.t0 = traj.t0;
  coarse.dt = 2.0 * traj.dt;
  for (std::size_t n = 0; n < traj.size(); n += 2) coarse.frames.push_back(traj.frames[n]);
  const EnergyIdentityCheck fine = energy_derivative_check(traj, k, gamma);
  const EnergyIdentityCheck crs = energy_derivative_check(coarse, k, gamma);
  // coarse interior frame m sits at fine frame 2m, i.e. fine residual index 2m - 1
  double a = 0, b = 0;
  for (std::size_t m = 0; m < crs.residual.size(); ++m) {
    const std::size_t i = 2 * (m + 1) - 1;
    if (i >= fine.residual.size()) break;
    a += crs.residual[m] * crs.residual[m];
    b += fine.residual[i] * fine.residual[i];
  }
  if (!(b > 0)) throw EmptySample("energy_identity_richardson: zero residual on the fine grid");
  return std::sqrt(a / b);
}

}  // namespace phnls
