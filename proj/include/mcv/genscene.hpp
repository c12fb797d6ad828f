#pragma once

#include <cstdint>

#include "mcv/scene.hpp"

namespace mcv {

struct GenSceneParams {
  int max_verts = 12;   // 2D vertex cap
  int max_facets = 8;   // 3D facet cap
  int max_pieces = 4;   // decoration pieces per edge
  int dec_percent = 100;  // chance (in percent) that a face gets decorated
};

// Deterministic pseudo-random decorated polytope scene: same seed, same scene,
// bit-identical across platforms. Always passes validate_scene. dim must be
// 2 or 3 (std::invalid_argument otherwise).
Scene gen_random_scene(std::uint64_t seed, int dim, const GenSceneParams& p = {});

// Convex polygon with n edges, every edge carrying one full open decoration
// piece: the benchmark scene family (n >= 3).
Scene gen_bench_polygon(int n);

}  // namespace mcv
