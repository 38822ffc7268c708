// Command-line entry point: one binary with subcommands for contact geometry,
// scattering matrices, event-driven simulation, orbit density, invariant
// analysis, and the unphysical-witness search.
#pragma once

#include <string>

#include "hardpair/shape.hpp"

namespace hardpair {

// Parses a "key = value" particle description file. Keys: kind
// (disk|ellipse|fourier), radius, a, b, coefficients (comma separated),
// density. '#' starts a comment. Unknown or missing keys raise ConfigError.
Particle load_particle_file(const std::string& path);

// Runs the full CLI; returns the process exit code:
// 0 success, 2 configuration error, 3 numerical failure, 4 --check failure.
int run_cli(int argc, const char* const* argv);

}  // namespace hardpair
