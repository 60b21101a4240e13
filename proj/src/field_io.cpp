#include "phnls/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "phnls/config.hpp"
#include "phnls/error.hpp"
#include "phnls/fit.hpp"

namespace phnls {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'P', 'H', 'N', 'L', 'S', 'F', '1', '\n'};

template <class T>
void put_le(std::ostream& out, T v) {
  static_assert(sizeof(T) == 8);
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((u >> (8 * i)) & 0xff);
  out.write(b, 8);
}

template <class T>
T get_le(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw ShapeError("read_field: truncated data");
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  T v;
  std::memcpy(&v, &u, 8);
  return v;
}

std::string frame_name(std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06zu.phf", n);
  return buf;
}

}  // namespace

void write_field(std::ostream& out, const SpectralField& f) {
  json h = to_json(f.spec());
  h["endianness"] = "little";
  h["version"] = PHNLS_VERSION;
  h["layout"] = "row-major [j][k], j ascending from -Nx/2";
  const std::string hs = h.dump();
  out.write(kMagic, 8);
  put_le<std::uint64_t>(out, hs.size());
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  for (const cplx& c : f.data()) {
    put_le<double>(out, c.real());
    put_le<double>(out, c.imag());
  }
  if (!out) throw Error("write_field: write failed");
}

SpectralField read_field(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw ShapeError("read_field: not a field file");
  const auto len = get_le<std::uint64_t>(in);
  if (len > (1u << 20)) throw ShapeError("read_field: implausible header length");
  std::string hs(len, '\0');
  if (!in.read(hs.data(), static_cast<std::streamsize>(len))) throw ShapeError("read_field: truncated header");
  json h;
  try {
    h = json::parse(hs);
  } catch (const json::parse_error&) {
    throw ShapeError("read_field: malformed header");
  }
  if (h.value("endianness", "") != "little") throw ShapeError("read_field: unsupported endianness");
  BasisSpec spec = basis_from_json(json{{"Lx", h.at("Lx")}, {"Nx", h.at("Nx")}, {"K", h.at("K")},
                                        {"hermite_nodes", h.at("hermite_nodes")}},
                                   "header");
  SpectralField f(spec);
  for (cplx& c : f.data()) {
    double re = get_le<double>(in);
    double im = get_le<double>(in);
    c = {re, im};
  }
  return f;
}

void write_field(const fs::path& path, const SpectralField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_field: cannot open " + path.string());
  write_field(out, f);
}

SpectralField read_field(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_field: cannot open " + path.string());
  return read_field(in);
}

void write_trajectory(const fs::path& dir, const Trajectory& traj, const json& config) {
  fs::create_directories(dir);
  json files = json::array();
  for (std::size_t n = 0; n < traj.size(); ++n) {
    write_field(dir / frame_name(n), traj.frames[n]);
    files.push_back(frame_name(n));
  }
  json m{{"t0", traj.t0}, {"dt", traj.dt}, {"frame_count", traj.size()}, {"frames", files},
         {"config", config}, {"version", PHNLS_VERSION}};
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
  if (!out) throw Error("write_trajectory: cannot write manifest");
}

Trajectory read_trajectory(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error("read_trajectory: no manifest in " + dir.string());
  json m = json::parse(in);
  Trajectory t;
  t.t0 = m.at("t0").get<double>();
  t.dt = m.at("dt").get<double>();
  for (const auto& name : m.at("frames")) t.frames.push_back(read_field(dir / name.get<std::string>()));
  if (t.frames.size() != m.at("frame_count").get<std::size_t>()) throw ShapeError("read_trajectory: frame count");
  return t;
}

std::string observables_csv(const std::vector<Observables>& series) {
  std::ostringstream o;
  o << "t,mass,energy,h1,h2,h4\n";
  for (const auto& s : series)
    o << format_double(s.t) << ',' << format_double(s.mass) << ',' << format_double(s.energy) << ','
      << format_double(s.h1) << ',' << format_double(s.h2) << ',' << format_double(s.h4) << '\n';
  return o.str();
}

}  // namespace phnls
