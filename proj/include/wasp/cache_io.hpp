#pragma once

#include <iosfwd>
#include <string>

#include "wasp/engine.hpp"

namespace wasp {

// Checkpoint format for WaspCache: a versioned binary blob holding the probe
// directions, the current web, the direction cursor, and the thresholds.
// Matrices are stored row-major as 64-bit floats, little-endian. The solve
// matrices c1/c2 are derived state and are rebuilt on load.

void save_cache(const WaspCache& cache, std::ostream& out);
void save_cache(const WaspCache& cache, const std::string& path);

// Throws std::runtime_error on IO failure, bad magic, unsupported version,
// or inconsistent dimensions.
WaspCache load_cache(std::istream& in);
WaspCache load_cache(const std::string& path);

}  // namespace wasp
