#pragma once

#include <string>

#include "mcv/scene.hpp"

namespace mcv {

// Bit-exact JSON forms (see docs/formats.md). All rationals are strings "p/q"
// (or "p"); all throw std::invalid_argument on malformed input.

std::string scene_to_json(const Scene& s);
Scene scene_from_json(const std::string& text);

// Witness files reference faces by sorted vertex-id keys of the scene file, so
// a witness is readable alongside its scene without lattice ids.
std::string witness_to_json(const Scene& s, const ConvexWitness& w);
ConvexWitness witness_from_json(const Scene& s, const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace mcv
