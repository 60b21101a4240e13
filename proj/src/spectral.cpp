#include "phnls/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "phnls/error.hpp"

namespace phnls {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

BasisSpec::BasisSpec(double Lx, std::size_t Nx, std::size_t K, std::size_t hermite_nodes)
    : Lx_(Lx), Nx_(Nx), hermite_(K == 0 ? 1 : K, hermite_nodes) {
  if (!(Lx > 0)) throw InvalidArgument("BasisSpec: Lx must be positive");
  if (Nx == 0 || Nx % 2 != 0) throw InvalidArgument("BasisSpec: Nx must be positive and even");
  if (K == 0) throw InvalidArgument("BasisSpec: K must be positive");
}

double BasisSpec::xi(std::size_t jj) const { return std::numbers::pi * j_of(jj) / Lx_; }

double BasisSpec::eigenvalue(std::size_t jj, std::size_t k) const {
  double x = xi(jj);
  return x * x + 2.0 * static_cast<double>(k) + 1.0;
}

double BasisSpec::lambda_max() const {
  double x = std::numbers::pi * static_cast<double>(Nx_) / (2.0 * Lx_);
  return x * x + 2.0 * static_cast<double>(K()) - 1.0;
}

double BasisSpec::x(std::size_t m, std::size_t Mx) const {
  if (Mx == 0) Mx = Nx_;
  return -Lx_ + 2.0 * Lx_ * static_cast<double>(m) / static_cast<double>(Mx);
}

bool BasisSpec::operator==(const BasisSpec& o) const {
  return Lx_ == o.Lx_ && Nx_ == o.Nx_ && K() == o.K() && hermite_.nodes() == o.hermite_.nodes();
}

SpectralField::SpectralField(const BasisSpec& spec) : spec_(spec), c_(spec.size()) {}

SpectralField::SpectralField(const BasisSpec& spec, std::vector<cplx> coeffs) : spec_(spec), c_(std::move(coeffs)) {
  if (c_.size() != spec_.size()) throw ShapeError("SpectralField: coefficient count does not match Nx*K");
}

static void require_same(const SpectralField& a, const SpectralField& b) {
  if (!(a.spec() == b.spec())) throw ShapeError("fields live on different bases");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx a) {
  for (auto& z : c_) z *= a;
  return *this;
}

bool SpectralField::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](cplx z) { return z == cplx{}; });
}

bool SpectralField::all_finite() const {
  return std::all_of(c_.begin(), c_.end(), [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

SpectralField SpectralField::unit_mode(const BasisSpec& spec, std::size_t jj, std::size_t k) {
  if (jj >= spec.Nx() || k >= spec.K()) throw InvalidArgument("unit_mode: index out of range");
  SpectralField f(spec);
  f(jj, k) = 1.0;
  return f;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

cplx inner(const SpectralField& a, const SpectralField& b) {
  require_same(a, b);
  cplx s{};
  for (std::size_t i = 0; i < a.data().size(); ++i) s += std::conj(a.data()[i]) * b.data()[i];
  return s;
}

double l2_norm(const SpectralField& f) {
  double s = 0;
  for (auto z : f.data()) s += std::norm(z);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// transforms

std::vector<cplx> to_physical(const SpectralField& f, std::size_t Mx) {
  const BasisSpec& sp = f.spec();
  const std::size_t Nx = sp.Nx(), K = sp.K(), n = sp.hermite().nodes();
  if (Mx == 0) Mx = Nx;
  if (Mx < Nx) throw ShapeError("to_physical: grid smaller than mode count");

  // Transpose to [k][jj] so the y-synthesis is one real GEMM.
  std::vector<cplx> ck(K * Nx);
  for (std::size_t jj = 0; jj < Nx; ++jj)
    for (std::size_t k = 0; k < K; ++k) ck[k * Nx + jj] = f(jj, k);
  std::vector<cplx> hy(n * Nx);
  Eigen::Map<const RowMat> T(sp.hermite().table().data(), static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(n));
  Eigen::Map<const RowMat> C(reinterpret_cast<const double*>(ck.data()), static_cast<Eigen::Index>(K),
                             static_cast<Eigen::Index>(2 * Nx));
  Eigen::Map<RowMat> H(reinterpret_cast<double*>(hy.data()), static_cast<Eigen::Index>(n),
                       static_cast<Eigen::Index>(2 * Nx));
  H.noalias() = T.transpose() * C;

  // u_m = (2Lx)^{-1/2} Σ_j c_j (-1)^j e^{2πijm/Mx}
  const double scale = 1.0 / std::sqrt(2.0 * sp.Lx());
  std::vector<cplx> out(n * Mx);
  for (std::size_t i = 0; i < n; ++i) {
    cplx* row = out.data() + i * Mx;
    for (std::size_t jj = 0; jj < Nx; ++jj) {
      int j = sp.j_of(jj);
      std::size_t idx = static_cast<std::size_t>((j % static_cast<int>(Mx) + static_cast<int>(Mx)) % static_cast<int>(Mx));
      double sg = (j % 2 == 0) ? scale : -scale;
      row[idx] = sg * hy[i * Nx + jj];
    }
  }
  detail::fft_rows(out.data(), Mx, n, +1);
  return out;
}

SpectralField to_spectral(std::span<const cplx> samples, const BasisSpec& sp, std::size_t Mx) {
  const std::size_t Nx = sp.Nx(), K = sp.K(), n = sp.hermite().nodes();
  if (Mx == 0) Mx = Nx;
  if (Mx < Nx) throw ShapeError("to_spectral: grid smaller than mode count");
  if (samples.size() != n * Mx) throw ShapeError("to_spectral: sample array does not match the grid");

  std::vector<cplx> buf(samples.begin(), samples.end());
  detail::fft_rows(buf.data(), Mx, n, -1);

  // c_j = (-1)^j sqrt(2Lx)/Mx Σ_m u_m e^{-2πijm/Mx}, then weight by W_i.
  const double scale = std::sqrt(2.0 * sp.Lx()) / static_cast<double>(Mx);
  const auto& W = sp.hermite().rule().scaled_weights;
  std::vector<cplx> q(n * Nx);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* row = buf.data() + i * Mx;
    for (std::size_t jj = 0; jj < Nx; ++jj) {
      int j = sp.j_of(jj);
      std::size_t idx = static_cast<std::size_t>((j % static_cast<int>(Mx) + static_cast<int>(Mx)) % static_cast<int>(Mx));
      double sg = (j % 2 == 0) ? scale : -scale;
      q[i * Nx + jj] = (sg * W[i]) * row[idx];
    }
  }
  std::vector<cplx> ck(K * Nx);
  Eigen::Map<const RowMat> T(sp.hermite().table().data(), static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(n));
  Eigen::Map<const RowMat> Q(reinterpret_cast<const double*>(q.data()), static_cast<Eigen::Index>(n),
                             static_cast<Eigen::Index>(2 * Nx));
  Eigen::Map<RowMat> C(reinterpret_cast<double*>(ck.data()), static_cast<Eigen::Index>(K),
                       static_cast<Eigen::Index>(2 * Nx));
  C.noalias() = T * Q;

  SpectralField f(sp);
  for (std::size_t jj = 0; jj < Nx; ++jj)
    for (std::size_t k = 0; k < K; ++k) f(jj, k) = ck[k * Nx + jj];
  return f;
}

template <class T>
static T grid_integral_impl(std::span<const T> samples, const BasisSpec& sp, std::size_t Mx) {
  const std::size_t n = sp.hermite().nodes();
  if (Mx == 0) Mx = sp.Nx();
  if (samples.size() != n * Mx) throw ShapeError("grid_integral: sample array does not match the grid");
  const auto& W = sp.hermite().rule().scaled_weights;
  T total{};
  for (std::size_t i = 0; i < n; ++i) {
    T row{};
    for (std::size_t m = 0; m < Mx; ++m) row += samples[i * Mx + m];
    total += W[i] * row;
  }
  return total * (2.0 * sp.Lx() / static_cast<double>(Mx));
}

cplx grid_integral(std::span<const cplx> samples, const BasisSpec& sp, std::size_t Mx) {
  return grid_integral_impl<cplx>(samples, sp, Mx);
}

double grid_integral(std::span<const double> samples, const BasisSpec& sp, std::size_t Mx) {
  return grid_integral_impl<double>(samples, sp, Mx);
}

// ---------------------------------------------------------------------------
// multipliers and projectors

double lp_phi(double lambda) {
  if (lambda <= 1.0) return 1.0;
  if (lambda >= 2.0) return 0.0;
  double a = std::exp(-1.0 / (2.0 - lambda));
  double b = std::exp(-1.0 / (lambda - 1.0));
  return a / (a + b);
}

double lp_psi(double N, double lambda) {
  double r = lambda / (N * N);
  return lp_phi(r) - lp_phi(4.0 * r);
}

int shell_index(double e) {
  auto l = static_cast<long long>(std::floor(std::sqrt(e)));
  while (static_cast<double>((l + 1) * (l + 1)) <= e) ++l;
  while (l > 0 && static_cast<double>(l * l) > e) --l;
  return static_cast<int>(l);
}

static double lam(double xi, std::size_t k) { return xi * xi + 2.0 * static_cast<double>(k) + 1.0; }

Multiplier Multiplier::identity() {
  return {[](double, std::size_t) { return cplx(1.0); }};
}

Multiplier Multiplier::sobolev(double s) {
  return {[s](double xi, std::size_t k) { return cplx(std::pow(lam(xi, k), 0.5 * s)); }};
}

Multiplier Multiplier::heat(double t) {
  return {[t](double xi, std::size_t k) { return cplx(std::exp(-t * lam(xi, k))); }};
}

Multiplier Multiplier::schrodinger(double t) {
  return {[t](double xi, std::size_t k) { return std::polar(1.0, t * lam(xi, k)); }};
}

Multiplier Multiplier::lp_smooth(double N) {
  return {[N](double xi, std::size_t k) { return cplx(lp_phi(lam(xi, k) / (N * N))); }};
}

Multiplier Multiplier::lp_block(double N) {
  return {[N](double xi, std::size_t k) { return cplx(lp_psi(N, lam(xi, k))); }};
}

Multiplier Multiplier::indicator(int lambda) {
  return {[lambda](double xi, std::size_t k) { return cplx(shell_index(lam(xi, k)) == lambda ? 1.0 : 0.0); }};
}

Multiplier operator*(const Multiplier& a, const Multiplier& b) {
  return {[a, b](double xi, std::size_t k) { return a(xi, k) * b(xi, k); }};
}

SpectralField apply_multiplier(const SpectralField& f, const Multiplier& m) {
  const BasisSpec& sp = f.spec();
  SpectralField out(sp);
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj) {
    double xi = sp.xi(jj);
    for (std::size_t k = 0; k < sp.K(); ++k) {
      cplx c = f(jj, k);
      cplx v = m(xi, k);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        if (c != cplx{}) throw NumericalError("apply_multiplier: non-finite symbol at a populated mode");
        continue;
      }
      out(jj, k) = v * c;
    }
  }
  return out;
}

double sobolev_norm(const SpectralField& f, double s) {
  const BasisSpec& sp = f.spec();
  double total = 0;
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj)
    for (std::size_t k = 0; k < sp.K(); ++k) {
      double a = std::norm(f(jj, k));
      if (a != 0.0) total += std::pow(sp.eigenvalue(jj, k), s) * a;
    }
  return std::sqrt(total);
}

namespace {

// (Y v)_k = sqrt(k/2) v_{k-1} + sqrt((k+1)/2) v_{k+1}, one mode longer.
std::vector<cplx> ladder_y(const std::vector<cplx>& v) {
  std::vector<cplx> out(v.size() + 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    cplx s{};
    if (k >= 1) s += std::sqrt(0.5 * k) * v[k - 1];
    if (k + 1 < v.size()) s += std::sqrt(0.5 * (k + 1)) * v[k + 1];
    out[k] = s;
  }
  return out;
}

}  // namespace

double equivalent_norm(const SpectralField& f, double s) {
  if (s < 0 || s != std::floor(s) || static_cast<long long>(s) % 2 != 0)
    throw Unsupported("equivalent_norm: s must be a non-negative even integer");
  const int m = static_cast<int>(s) / 2;
  const BasisSpec& sp = f.spec();
  double d2 = 0, y2 = 0;
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj) {
    const double xi2 = sp.xi(jj) * sp.xi(jj);
    std::vector<cplx> col(sp.K());
    for (std::size_t k = 0; k < sp.K(); ++k) col[k] = f(jj, k);
    std::vector<cplx> d = col, w = col;
    for (int r = 0; r < m; ++r) {
      // -Δ = ξ² + (2k+1) - Y², and ⟨y⟩² = 1 + Y².
      auto yd = ladder_y(ladder_y(d));
      auto yw = ladder_y(ladder_y(w));
      d.resize(yd.size());
      w.resize(yw.size());
      for (std::size_t k = 0; k < yd.size(); ++k) {
        d[k] = (xi2 + 2.0 * static_cast<double>(k) + 1.0) * d[k] - yd[k];
        w[k] = w[k] + yw[k];
      }
    }
    for (auto z : d) d2 += std::norm(z);
    for (auto z : w) y2 += std::norm(z);
  }
  return std::sqrt(0.5 * (d2 + y2));
}

static bool is_dyadic(int N) { return N >= 1 && (N & (N - 1)) == 0; }

SpectralField lp_project(const SpectralField& f, int N, LPKind kind) {
  if (!is_dyadic(N)) throw InvalidArgument("lp_project: N must be a power of two");
  if (kind == LPKind::Delta && N < 2) throw InvalidArgument("lp_project: Δ_N needs N >= 2 (N=1 lives in S_1)");
  return apply_multiplier(f, kind == LPKind::S ? Multiplier::lp_smooth(N) : Multiplier::lp_block(N));
}

SpectralField indicator_project(const SpectralField& f, int lambda) {
  if (lambda < 0) throw InvalidArgument("indicator_project: negative shell");
  return apply_multiplier(f, Multiplier::indicator(lambda));
}

}  // namespace phnls
