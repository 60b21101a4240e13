#include "phnls/evolve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fft.hpp"
#include "phnls/error.hpp"

namespace phnls {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double gamma_of(Nonlinearity n) {
  switch (n) {
    case Nonlinearity::defocusing: return 1.0;
    case Nonlinearity::focusing: return -1.0;
    case Nonlinearity::linear: return 0.0;
  }
  return 0.0;
}

std::string to_string(Nonlinearity n) {
  switch (n) {
    case Nonlinearity::defocusing: return "defocusing";
    case Nonlinearity::focusing: return "focusing";
    case Nonlinearity::linear: return "linear";
  }
  return "linear";
}

Nonlinearity parse_nonlinearity(const std::string& s) {
  if (s == "defocusing") return Nonlinearity::defocusing;
  if (s == "focusing") return Nonlinearity::focusing;
  if (s == "linear") return Nonlinearity::linear;
  throw InvalidArgument("unknown nonlinearity '" + s + "' (expected defocusing, focusing or linear)");
}

SpectralField linear_propagate(const SpectralField& f, double t) {
  if (t == 0.0) return f;
  return apply_multiplier(f, Multiplier::schrodinger(t));
}

// ---------------------------------------------------------------------------
// heat flow

namespace {

// Rows g_k(x_m) = (2Lx)^{-1/2} Σ_j c[j,k] e^{iξ_j x_m} on an Mx-point grid, [k][m].
std::vector<cplx> x_synthesis(const SpectralField& f, std::size_t Mx) {
  const BasisSpec& sp = f.spec();
  const std::size_t Nx = sp.Nx(), K = sp.K();
  std::vector<cplx> g(K * Mx);
  const double scale = 1.0 / std::sqrt(2.0 * sp.Lx());
  const int M = static_cast<int>(Mx);
  for (std::size_t jj = 0; jj < Nx; ++jj) {
    int j = sp.j_of(jj);
    auto idx = static_cast<std::size_t>((j % M + M) % M);
    double sg = (j % 2 == 0) ? scale : -scale;
    for (std::size_t k = 0; k < K; ++k) g[k * Mx + idx] = sg * f(jj, k);
  }
  detail::fft_rows(g.data(), Mx, K, +1);
  return g;
}

SpectralField heat_mehler(const SpectralField& f, double t) {
  const BasisSpec& sp = f.spec();
  const std::size_t Nx = sp.Nx(), K = sp.K(), n = sp.hermite().nodes();
  const auto& ynodes = sp.hermite().rule().nodes;
  const double pi = std::numbers::pi;

  // Uniform y' grid fine enough for both the data and a kernel of width ~sqrt(2t).
  const double band = std::sqrt(2.0 * K + 1.0) + 4.0;
  const double hy = std::min(2.0 * pi / (1.5 * band), 2.0 * pi * std::sqrt(t / 40.0));
  const double Y = std::sqrt(2.0 * K + 1.0) + 8.0;
  const auto Q = static_cast<std::size_t>(std::ceil(2.0 * Y / hy)) + 1;

  // Padded x' grid so the discrete convolution does not alias the Gaussian.
  std::size_t Mx = Nx;
  const double dx0 = 2.0 * sp.Lx() / static_cast<double>(Nx);
  while (t * std::pow(2.0 * pi * static_cast<double>(Mx) / (static_cast<double>(Nx) * dx0), 2) < 40.0) Mx *= 2;
  const double dxp = 2.0 * sp.Lx() / static_cast<double>(Mx);

  // S(y'_q, x'_m) = Σ_k h_k(y'_q) g_k(x'_m)
  RowMat Hq(static_cast<Eigen::Index>(Q), static_cast<Eigen::Index>(K));
  std::vector<double> row(K);
  for (std::size_t q = 0; q < Q; ++q) {
    hermite_eval_all(-Y + hy * static_cast<double>(q), K, row.data());
    for (std::size_t k = 0; k < K; ++k) Hq(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k)) = row[k];
  }
  std::vector<cplx> g = x_synthesis(f, Mx);
  Eigen::Map<const RowMat> G(reinterpret_cast<const double*>(g.data()), static_cast<Eigen::Index>(K),
                             static_cast<Eigen::Index>(2 * Mx));
  RowMat S = Hq * G;

  // y kernel: (2π sinh 2t)^{-1/2} exp(-[¼(2coth2t - tanh t)(y-y')² + ¼ tanh t (y+y')²])
  const double th = std::tanh(t), cth2 = 1.0 / std::tanh(2.0 * t);
  const double ay = 0.25 * (2.0 * cth2 - th), by = 0.25 * th;
  const double cy = 1.0 / std::sqrt(2.0 * pi * std::sinh(2.0 * t));
  RowMat Ky(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(Q));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t q = 0; q < Q; ++q) {
      double y = ynodes[i], yp = -Y + hy * static_cast<double>(q);
      Ky(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(q)) =
          hy * cy * std::exp(-(ay * (y - yp) * (y - yp) + by * (y + yp) * (y + yp)));
    }
  RowMat Z = Ky * S;  // n × 2Mx, interleaved complex

  // x kernel, periodized: Σ_p (4πt)^{-1/2} exp(-(x - x' + 2Lx p)²/(4t))
  const double cx = 1.0 / std::sqrt(4.0 * pi * t);
  const double L2 = 2.0 * sp.Lx();
  RowMat Gx(static_cast<Eigen::Index>(Mx), static_cast<Eigen::Index>(Nx));
  for (std::size_t mp = 0; mp < Mx; ++mp)
    for (std::size_t m = 0; m < Nx; ++m) {
      double d = sp.x(m) - sp.x(mp, Mx);
      d -= L2 * std::round(d / L2);
      double s = std::exp(-d * d / (4.0 * t));
      for (int p = 1;; ++p) {
        double a = std::exp(-(d + L2 * p) * (d + L2 * p) / (4.0 * t));
        double b = std::exp(-(d - L2 * p) * (d - L2 * p) / (4.0 * t));
        s += a + b;
        if (a + b <= 1e-16 * s || p > 1000) break;
      }
      Gx(static_cast<Eigen::Index>(mp), static_cast<Eigen::Index>(m)) = dxp * cx * s;
    }
  RowMat Zr(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(Mx));
  RowMat Zi(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(Mx));
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i)
    for (Eigen::Index m = 0; m < static_cast<Eigen::Index>(Mx); ++m) {
      Zr(i, m) = Z(i, 2 * m);
      Zi(i, m) = Z(i, 2 * m + 1);
    }
  RowMat Or = Zr * Gx, Oi = Zi * Gx;
  std::vector<cplx> out(n * Nx);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < Nx; ++m)
      out[i * Nx + m] = {Or(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)),
                         Oi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m))};
  return to_spectral(out, sp);
}

}  // namespace

SpectralField heat_propagate(const SpectralField& f, double t, HeatMethod method) {
  if (method == HeatMethod::spectral) {
    if (t < 0) throw InvalidArgument("heat_propagate: t must be non-negative");
    if (t == 0) return f;
    return apply_multiplier(f, Multiplier::heat(t));
  }
  if (!(t > 0)) throw InvalidArgument("heat_propagate: the Mehler kernel needs t > 0");
  return heat_mehler(f, t);
}

// ---------------------------------------------------------------------------
// nonlinear pieces

std::size_t dealiased_grid(const BasisSpec& spec) { return 2 * spec.Nx(); }

SpectralField cubic_term(const SpectralField& u) {
  const std::size_t Mx = dealiased_grid(u.spec());
  auto p = to_physical(u, Mx);
  for (auto& z : p) z *= std::norm(z);
  return to_spectral(p, u.spec(), Mx);
}

SpectralField nls_step(const SpectralField& u, double dt, double gamma) {
  if (!u.all_finite()) throw NumericalError("nls_step: non-finite coefficients");
  SpectralField v = linear_propagate(u, 0.5 * dt);
  if (gamma != 0.0) {
    const std::size_t Mx = dealiased_grid(u.spec());
    auto p = to_physical(v, Mx);
    for (auto& z : p) z *= std::polar(1.0, gamma * dt * std::norm(z));
    v = to_spectral(p, u.spec(), Mx);
  }
  v = linear_propagate(v, 0.5 * dt);
  if (!v.all_finite()) throw NumericalError("nls_step: non-finite result");
  return v;
}

// ---------------------------------------------------------------------------
// initial data

SpectralField make_initial(const InitialData& init, const BasisSpec& sp, std::uint64_t seed) {
  SpectralField f(sp);
  switch (init.kind) {
    case InitialData::Kind::coherent_gaussian: {
      const std::size_t Nx = sp.Nx(), n = sp.hermite().nodes();
      const auto& yn = sp.hermite().rule().nodes;
      const double c = std::pow(std::numbers::pi, -0.25);
      std::vector<cplx> u(n * Nx);
      for (std::size_t i = 0; i < n; ++i) {
        double gy = c * std::exp(-0.5 * (yn[i] - init.y0) * (yn[i] - init.y0));
        for (std::size_t m = 0; m < Nx; ++m) {
          double x = sp.x(m), d = x - init.x0;
          d -= 2.0 * sp.Lx() * std::round(d / (2.0 * sp.Lx()));
          u[i * Nx + m] = init.amplitude * gy * std::exp(-d * d / (2.0 * init.width * init.width)) *
                          std::polar(1.0, init.momentum * x);
        }
      }
      f = to_spectral(u, sp);
      break;
    }
    case InitialData::Kind::random_sobolev: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> g;
      for (std::size_t jj = 0; jj < sp.Nx(); ++jj)
        for (std::size_t k = 0; k < sp.K(); ++k) {
          double lam = sp.eigenvalue(jj, k);
          double a = g(rng), b = g(rng);
          f(jj, k) = std::pow(lam, -0.5 * init.s) * std::exp(-init.decay * lam) * cplx(a, b);
        }
      double nrm = l2_norm(f);
      if (nrm > 0) f *= init.amplitude / nrm;
      break;
    }
    case InitialData::Kind::explicit_coefficients: {
      for (const auto& md : init.modes) {
        int jj = md.j + static_cast<int>(sp.Nx() / 2);
        if (jj < 0 || jj >= static_cast<int>(sp.Nx()) || md.k >= sp.K())
          throw InvalidArgument("make_initial: explicit mode outside the basis");
        f(static_cast<std::size_t>(jj), md.k) += md.value;
      }
      break;
    }
  }
  if (init.norm_target > 0) {
    double nrm = sobolev_norm(f, init.norm_s);
    if (nrm == 0) throw InvalidArgument("make_initial: cannot rescale a zero field");
    f *= init.norm_target / nrm;
  }
  return f;
}

// ---------------------------------------------------------------------------
// observables and simulation

double mass(const SpectralField& u) { return std::pow(l2_norm(u), 2); }

double quartic_integral(const SpectralField& u) {
  const std::size_t Mx = dealiased_grid(u.spec());
  auto p = to_physical(u, Mx);
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = std::norm(p[i]) * std::norm(p[i]);
  return grid_integral(q, u.spec(), Mx);
}

double energy(const SpectralField& u, double gamma) {
  double e = 0.5 * std::pow(sobolev_norm(u, 1.0), 2);
  if (gamma != 0.0) e += 0.25 * gamma * quartic_integral(u);
  return e;
}

Observables observe(const SpectralField& u, double t, double gamma) {
  return {t, mass(u), energy(u, gamma), sobolev_norm(u, 1), sobolev_norm(u, 2), sobolev_norm(u, 4)};
}

void SimConfig::validate() const {
  if (!(dt > 0)) throw InvalidArgument("simulate: dt must be positive");
  if (dt * spec.lambda_max() > std::numbers::pi)
    throw ResolutionError("simulate: dt*lambda_max = " + std::to_string(dt * spec.lambda_max()) +
                          " exceeds pi; use dt <= " + std::to_string(std::numbers::pi / spec.lambda_max()) +
                          " or reduce Nx, K");
  if (t_end < dt) throw InvalidArgument("simulate: t_end must be at least dt");
  if (output_stride == 0) throw InvalidArgument("simulate: output_stride must be positive");
}

SimulationResult simulate(const SimConfig& cfg) { return simulate(cfg, make_initial(cfg.initial, cfg.spec, cfg.seed)); }

SimulationResult simulate(const SimConfig& cfg, const SpectralField& initial) {
  cfg.validate();
  if (!(initial.spec() == cfg.spec)) throw ShapeError("simulate: initial field on a different basis");
  const double gamma = gamma_of(cfg.nonlinearity);
  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  SimulationResult res{{}, {}, initial};
  res.trajectory.t0 = 0.0;
  res.trajectory.dt = cfg.dt * static_cast<double>(cfg.output_stride);
  SpectralField u = initial;
  const Observables o0 = observe(u, 0.0, gamma);
  res.series.push_back(o0);
  if (cfg.keep_frames) res.trajectory.frames.push_back(u);
  for (std::size_t s = 1; s <= steps; ++s) {
    u = nls_step(u, cfg.dt, gamma);
    if (s % cfg.output_stride == 0) {
      Observables o = observe(u, cfg.dt * static_cast<double>(s), gamma);
      if (!(o.h1 <= cfg.blowup_factor * std::max(o0.h1, 1e-300)))
        throw BlowUpDetected("simulate: H1 norm exceeded the blow-up threshold at t = " + std::to_string(o.t));
      res.series.push_back(o);
      if (cfg.keep_frames) res.trajectory.frames.push_back(u);
    }
  }
  res.final_state = u;
  return res;
}

// ---------------------------------------------------------------------------
// Picard iteration

PicardResult picard_iterate(const SpectralField& phi, double T, std::size_t iters, double gamma, std::size_t steps) {
  if (!(T > 0) || T > 1) throw InvalidArgument("picard_iterate: T must lie in (0, 1]");
  if (iters < 2) throw InvalidArgument("picard_iterate: at least two iterations");
  if (steps < 2) throw InvalidArgument("picard_iterate: at least two time steps");
  const double h = T / static_cast<double>(steps);
  PicardResult res;

  Trajectory u0;
  u0.dt = h;
  for (std::size_t n = 0; n <= steps; ++n) u0.frames.push_back(linear_propagate(phi, h * static_cast<double>(n)));
  res.iterates.push_back(std::move(u0));

  for (std::size_t it = 1; it <= iters; ++it) {
    const Trajectory& prev = res.iterates.back();
    Trajectory next;
    next.dt = h;
    SpectralField J(phi.spec()), Bprev(phi.spec());
    for (std::size_t n = 0; n <= steps; ++n) {
      double t = h * static_cast<double>(n);
      SpectralField B = gamma == 0.0 ? SpectralField(phi.spec()) : linear_propagate(cubic_term(prev.frames[n]), -t);
      if (n > 0) {
        SpectralField inc = Bprev + B;
        inc *= 0.5 * h;
        J += inc;
      }
      SpectralField v = J;
      v *= cplx(0.0, gamma);
      v += phi;
      next.frames.push_back(linear_propagate(v, t));
      Bprev = std::move(B);
    }
    double d = 0;
    for (std::size_t n = 0; n <= steps; ++n) d = std::max(d, sobolev_norm(next.frames[n] - prev.frames[n], 1.0));
    res.differences.push_back(d);
    res.iterates.push_back(std::move(next));
  }
  for (std::size_t i = 3; i < res.differences.size(); ++i)
    if (res.differences[i] > 0 && res.differences[i] >= res.differences[i - 1]) res.contracting = false;
  return res;
}

// ---------------------------------------------------------------------------
// time derivatives

TimeDerivatives time_derivatives(const SpectralField& u, int m, double gamma, bool extra_nonlinear) {
  if (m < 0) throw InvalidArgument("time_derivatives: negative order");
  if (m > 4) throw Unsupported("time_derivatives: order above 4 is not supported");
  const BasisSpec& sp = u.spec();
  const std::size_t Mx = dealiased_grid(sp);
  TimeDerivatives out;
  out.d.push_back(u);
  std::vector<std::vector<cplx>> phys;
  if (gamma != 0.0) phys.push_back(to_physical(u, Mx));

  auto binom = [](int a, int b) {
    double r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
  };

  auto nonlinear = [&](int j) {
    if (gamma == 0.0) return SpectralField(sp);
    std::vector<cplx> acc(phys[0].size());
    for (int a = 0; a <= j; ++a)
      for (int b = 0; a + b <= j; ++b) {
        int c = j - a - b;
        double w = binom(j, a) * binom(j - a, b);
        const auto &pa = phys[a], &pb = phys[b], &pc = phys[c];
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * pa[i] * pb[i] * std::conj(pc[i]);
      }
    SpectralField N = to_spectral(acc, sp, Mx);
    std::vector<double> dens(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) dens[i] = std::norm(acc[i]);
    double g = grid_integral(dens, sp, Mx), p = mass(N);
    if (g > 0) out.projection_loss = std::max(out.projection_loss, std::sqrt(std::max(0.0, g - p) / g));
    return N;
  };

  for (int j = 0; j < m; ++j) {
    SpectralField N = nonlinear(j);
    SpectralField next = apply_multiplier(out.d[j], Multiplier::sobolev(2.0));
    SpectralField gn = N;
    gn *= gamma;
    next += gn;
    next *= cplx(0.0, 1.0);
    if (gamma != 0.0) phys.push_back(to_physical(next, Mx));
    out.n.push_back(std::move(N));
    out.d.push_back(std::move(next));
  }
  if (extra_nonlinear) out.n.push_back(nonlinear(m));
  return out;
}

SpectralField time_derivative(const SpectralField& u, int m, double gamma) {
  return time_derivatives(u, m, gamma).d.back();
}

}  // namespace phnls
