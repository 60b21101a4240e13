#include <cmath>
#include <numbers>

#include "phnls/error.hpp"
#include "phnls/estlab.hpp"
#include "phnls/hermite.hpp"

namespace phnls {

namespace {

cplx gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  double re = g(rng);
  double im = g(rng);
  return {re, im};
}

void normalize(SpectralField& f, const char* what) {
  double n = l2_norm(f);
  if (!(n > 0)) throw EmptySample(std::string(what) + ": no modes of the basis fall in the requested support");
  f *= cplx(1.0 / n);
}

// Every mode with λ < lam_sup must be representable.
void require_band(const BasisSpec& spec, double lam_sup, const char* what) {
  if (std::numbers::pi * static_cast<double>(spec.Nx() / 2) / spec.Lx() < std::sqrt(lam_sup))
    throw ResolutionError(std::string(what) + ": Nx too small for the frequency support; increase Nx or decrease Lx");
  if (static_cast<double>(spec.K()) < std::ceil(0.5 * (lam_sup - 1.0)))
    throw ResolutionError(std::string(what) + ": K too small for the frequency support");
}

double block_weight(int N, double lam) {
  if (N == 1) return lp_phi(lam);
  return lp_psi(N, lam);
}

}  // namespace

SpectralField random_block(const BasisSpec& spec, int N, std::mt19937_64& rng) {
  if (N < 1) throw InvalidArgument("random_block: N must be >= 1");
  const double n2 = static_cast<double>(N) * N;
  require_band(spec, 2.0 * n2, "random_block");
  SpectralField f(spec);
  for (std::size_t jj = 0; jj < spec.Nx(); ++jj)
    for (std::size_t k = 0; k < spec.K(); ++k) {
      double w = block_weight(N, spec.eigenvalue(jj, k));
      if (w != 0.0) f(jj, k) = w * gaussian(rng);
    }
  normalize(f, "random_block");
  return f;
}

SpectralField random_shell(const BasisSpec& spec, int lambda, ShellPart part, std::mt19937_64& rng) {
  if (lambda < 1) throw InvalidArgument("random_shell: lambda must be >= 1");
  const double top = (lambda + 1.0) * (lambda + 1.0);
  require_band(spec, top, "random_shell");
  SpectralField f(spec);
  const double split = 0.5 * lambda * lambda;
  for (std::size_t jj = 0; jj < spec.Nx(); ++jj) {
    double xi2 = spec.xi(jj) * spec.xi(jj);
    if (part == ShellPart::x_dominated && xi2 < split) continue;
    if (part == ShellPart::hermite_dominated && xi2 >= split) continue;
    for (std::size_t k = 0; k < spec.K(); ++k)
      if (shell_index(spec.eigenvalue(jj, k)) == lambda) f(jj, k) = gaussian(rng);
  }
  normalize(f, "random_shell");
  return f;
}

SpectralField wavepacket(const BasisSpec& spec, int N, double x0, double y0) {
  if (N < 1) throw InvalidArgument("wavepacket: N must be >= 1");
  require_band(spec, 2.0 * N * N, "wavepacket");
  std::vector<double> h(spec.K());
  hermite_eval_all(y0, spec.K(), h.data());
  SpectralField f(spec);
  for (std::size_t jj = 0; jj < spec.Nx(); ++jj) {
    cplx ph = std::polar(1.0, -spec.xi(jj) * x0);
    for (std::size_t k = 0; k < spec.K(); ++k) {
      double w = block_weight(N, spec.eigenvalue(jj, k));
      if (w != 0.0) f(jj, k) = w * h[k] * ph;
    }
  }
  normalize(f, "wavepacket");
  return f;
}

SpectralField random_band(const BasisSpec& spec, int jcap, std::size_t kcap, std::mt19937_64& rng) {
  if (jcap < 0 || jcap > static_cast<int>(spec.Nx() / 2) - 1 || kcap == 0 || kcap > spec.K())
    throw ResolutionError("random_band: band does not fit the basis");
  SpectralField f(spec);
  const int half = static_cast<int>(spec.Nx() / 2);
  for (int j = -jcap; j <= jcap; ++j)
    for (std::size_t k = 0; k < kcap; ++k) f(static_cast<std::size_t>(j + half), k) = gaussian(rng);
  normalize(f, "random_band");
  return f;
}

std::vector<cplx> random_envelope(std::size_t frames, double T, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> om(-10.0, 10.0);
  cplx c[3];
  double w[3];
  for (int r = 0; r < 3; ++r) {
    c[r] = 0.3 * gaussian(rng) / static_cast<double>(r + 1);
    w[r] = om(rng);
  }
  std::vector<cplx> g(frames);
  for (std::size_t n = 0; n < frames; ++n) {
    double t = T * static_cast<double>(n) / static_cast<double>(frames - 1);
    cplx v = 1.0;
    for (int r = 0; r < 3; ++r) v += c[r] * std::polar(1.0, w[r] * t);
    g[n] = v;
  }
  return g;
}

BasisSpec estlab_default_spec(const std::string& estimate) {
  if (estimate == "strichartz" || estimate == "trilinear") return BasisSpec(8.0, 64, 32);
  if (estimate == "almost-orth") return BasisSpec(std::numbers::pi / 2, 66, 2112);
  if (estimate == "bernstein" || estimate == "bilinear-l2" || estimate == "bilinear-h1" ||
      estimate == "bilinear-bourgain")
    return BasisSpec(std::numbers::pi / 4, 64, 4096);
  throw InvalidArgument("estlab_default_spec: unknown estimate '" + estimate + "'");
}

bool strichartz_admissible(double q, double r) {
  if (!(r >= 2) || !std::isfinite(r)) return false;
  if (!(q >= 2)) return false;
  double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  return std::abs(inv_q - (0.5 - 1.0 / r)) < 1e-12;
}

}  // namespace phnls
