#pragma once

#include "lattice/core.hpp"

#include <cstdint>
#include <string>

namespace lattice {

// Writes to a temporary file in the same directory and renames it over the target.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// {"d": int, "entries": [{"n": [...], "v": number}, ...]}; duplicates rejected.
Potential potential_from_json(const std::string& text);
std::string potential_to_json(const Potential& v);
Potential load_potential(const std::string& path);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string& s);
std::string hex64(std::uint64_t h);

inline const char* library_version() { return LATTICE_VERSION; }

}  // namespace lattice
