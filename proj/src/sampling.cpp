#include "phnls/sampling.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fft.hpp"
#include "phnls/hermite.hpp"
#include "phnls/error.hpp"

namespace phnls {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

SampleGrid::SampleGrid(const BasisSpec& spec, std::size_t kmax, std::size_t Mx, double ylo, double yhi, std::size_t Ny)
    : spec_(spec), kmax_(kmax), Mx_(Mx) {
  if (Ny < 2 || !(yhi > ylo)) throw InvalidArgument("SampleGrid: need Ny >= 2 and yhi > ylo");
  const double dy = (yhi - ylo) / static_cast<double>(Ny - 1);
  y_.resize(Ny);
  for (std::size_t i = 0; i < Ny; ++i) y_[i] = ylo + dy * static_cast<double>(i);
  wy_.assign(Ny, dy);
  build_table();
}

SampleGrid::SampleGrid(const BasisSpec& spec, std::size_t kmax, std::size_t Mx, std::vector<double> y,
                       std::vector<double> wy)
    : spec_(spec), kmax_(kmax), Mx_(Mx), y_(std::move(y)), wy_(std::move(wy)) {
  if (y_.empty() || y_.size() != wy_.size()) throw InvalidArgument("SampleGrid: need matching nonempty nodes and weights");
  build_table();
}

SampleGrid SampleGrid::gaussian(const BasisSpec& spec, std::size_t kmax, std::size_t Mx, int p) {
  if (p < 1) throw InvalidArgument("SampleGrid::gaussian: p must be positive");
  const std::size_t n = static_cast<std::size_t>(p) * (kmax > 0 ? kmax - 1 : 0) / 2 + 2;
  QuadratureRule r = gauss_hermite_nodes(n);
  const double c = std::sqrt(0.5 * p);
  std::vector<double> y(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = r.nodes[i] / c;
    w[i] = r.scaled_weights[i] / c;
  }
  return SampleGrid(spec, kmax, Mx, std::move(y), std::move(w));
}

void SampleGrid::build_table() {
  if (kmax_ == 0 || kmax_ > spec_.K()) throw InvalidArgument("SampleGrid: kmax must lie in [1, K]");
  if (Mx_ < spec_.Nx()) throw InvalidArgument("SampleGrid: Mx must be at least Nx");
  dx_ = 2.0 * spec_.Lx() / static_cast<double>(Mx_);
  const std::size_t rows = kmax_ + 1;
  table_.resize(y_.size() * rows);
  for (std::size_t i = 0; i < y_.size(); ++i) hermite_eval_all(y_[i], rows, table_.data() + i * rows);
}

cplx SampleGrid::integrate(std::span<const cplx> v) const {
  if (v.size() != y_.size() * Mx_) throw ShapeError("SampleGrid::integrate: sample count mismatch");
  cplx s{};
  for (std::size_t i = 0; i < y_.size(); ++i) {
    cplx r{};
    for (std::size_t m = 0; m < Mx_; ++m) r += v[i * Mx_ + m];
    s += weight(i) * r;
  }
  return s;
}

double SampleGrid::integrate(std::span<const double> v) const {
  if (v.size() != y_.size() * Mx_) throw ShapeError("SampleGrid::integrate: sample count mismatch");
  double s = 0;
  for (std::size_t i = 0; i < y_.size(); ++i) {
    double r = 0;
    for (std::size_t m = 0; m < Mx_; ++m) r += v[i * Mx_ + m];
    s += weight(i) * r;
  }
  return s;
}

std::vector<std::vector<cplx>> SampleGrid::evaluate(const SpectralField& f, double t,
                                                    std::span<const Component> comps) const {
  if (!(f.spec() == spec_)) throw ShapeError("SampleGrid: field on a different basis");
  const std::size_t Nx = spec_.Nx(), K = spec_.K(), rows = kmax_ + 1;

  std::vector<std::size_t> cols;
  for (std::size_t jj = 0; jj < Nx; ++jj) {
    bool any = false;
    for (std::size_t k = 0; k < K; ++k)
      if (f(jj, k) != cplx{}) {
        if (k >= kmax_) throw ShapeError("SampleGrid: field populates Hermite rows beyond kmax");
        any = true;
      }
    if (any) cols.push_back(jj);
  }
  const std::size_t nc = cols.size();
  // Only the Hermite rows the field reaches take part in the synthesis.
  std::size_t used = 0;
  for (std::size_t jj : cols)
    for (std::size_t k = used; k < kmax_; ++k)
      if (f(jj, k) != cplx{}) used = k + 1;
  const std::size_t r = std::min(used + 1, rows);

  bool want_y = false, want_v = false;
  for (auto c : comps) (c == Component::dy ? want_y : want_v) = true;

  // Coefficients of e^{itA} f restricted to populated columns, [k][col].
  std::vector<cplx> c0(rows * nc), c1;
  for (std::size_t a = 0; a < nc; ++a) {
    std::size_t jj = cols[a];
    for (std::size_t k = 0; k < kmax_; ++k) {
      cplx v = f(jj, k);
      if (t != 0.0 && v != cplx{}) v *= std::polar(1.0, t * spec_.eigenvalue(jj, k));
      c0[k * nc + a] = v;
    }
  }
  if (want_y) {
    // ∂y: d_k = sqrt((k+1)/2) c_{k+1} - sqrt(k/2) c_{k-1}
    c1.assign(rows * nc, cplx{});
    for (std::size_t k = 0; k < rows; ++k)
      for (std::size_t a = 0; a < nc; ++a) {
        cplx s{};
        if (k + 1 < rows) s += std::sqrt(0.5 * static_cast<double>(k + 1)) * c0[(k + 1) * nc + a];
        if (k >= 1) s -= std::sqrt(0.5 * static_cast<double>(k)) * c0[(k - 1) * nc + a];
        c1[k * nc + a] = s;
      }
  }

  Eigen::Map<const RowMat> H(table_.data(), static_cast<Eigen::Index>(Ny()), static_cast<Eigen::Index>(rows));
  auto synth = [&](const std::vector<cplx>& c) {
    std::vector<cplx> g(Ny() * nc);
    if (nc == 0) return g;
    Eigen::Map<const RowMat> C(reinterpret_cast<const double*>(c.data()), static_cast<Eigen::Index>(r),
                               static_cast<Eigen::Index>(2 * nc));
    Eigen::Map<RowMat> G(reinterpret_cast<double*>(g.data()), static_cast<Eigen::Index>(Ny()),
                         static_cast<Eigen::Index>(2 * nc));
    G.noalias() = H.leftCols(static_cast<Eigen::Index>(r)) * C;
    return g;
  };
  std::vector<cplx> gv, gy;
  if (want_v) gv = synth(c0);
  if (want_y) gy = synth(c1);

  const double scale = 1.0 / std::sqrt(2.0 * spec_.Lx());
  const int M = static_cast<int>(Mx_);
  std::vector<std::vector<cplx>> out;
  for (auto comp : comps) {
    const std::vector<cplx>& g = comp == Component::dy ? gy : gv;
    std::vector<cplx> u(Ny() * Mx_);
    for (std::size_t a = 0; a < nc; ++a) {
      int j = spec_.j_of(cols[a]);
      auto idx = static_cast<std::size_t>((j % M + M) % M);
      cplx fac = (j % 2 == 0) ? scale : -scale;
      if (comp == Component::dx) fac *= cplx(0.0, spec_.xi(cols[a]));
      for (std::size_t i = 0; i < Ny(); ++i) u[i * Mx_ + idx] = fac * g[i * nc + a];
    }
    detail::fft_rows(u.data(), Mx_, Ny(), +1);
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<cplx> SampleGrid::evaluate(const SpectralField& f, double t, Component c) const {
  Component cs[1] = {c};
  return std::move(evaluate(f, t, cs)[0]);
}

ModeExtent mode_extent(const SpectralField& f) {
  const BasisSpec& sp = f.spec();
  ModeExtent e;
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj)
    for (std::size_t k = 0; k < sp.K(); ++k)
      if (f(jj, k) != cplx{}) {
        e.kmax = std::max(e.kmax, k + 1);
        e.jmax = std::max(e.jmax, std::abs(sp.j_of(jj)));
        e.lambda_max = std::max(e.lambda_max, sp.eigenvalue(jj, k));
      }
  return e;
}

}  // namespace phnls
