#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "phnls/bourgain.hpp"
#include "phnls/evolve.hpp"

namespace phnls {

// Layout: the 8 bytes "PHNLSF1\n", the header length as a little-endian uint64,
// a UTF-8 JSON header {"Lx", "Nx", "K", "hermite_nodes", "endianness": "little",
// "version", "layout": "row-major [j][k], j ascending from -Nx/2"}, then Nx*K
// coefficients as (re, im) little-endian float64 pairs.
void write_field(std::ostream& out, const SpectralField& f);
SpectralField read_field(std::istream& in);
void write_field(const std::filesystem::path& path, const SpectralField& f);
SpectralField read_field(const std::filesystem::path& path);

// Directory with frame_000000.phf ... and manifest.json (t0, dt, frames, config, version).
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const nlohmann::json& config);
Trajectory read_trajectory(const std::filesystem::path& dir);

// Header "t,mass,energy,h1,h2,h4"; shortest round-trip decimals.
std::string observables_csv(const std::vector<Observables>& series);

}  // namespace phnls
