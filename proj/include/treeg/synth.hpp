#pragma once

#include <cstdint>
#include <string>

#include "treeg/dataset.hpp"

namespace treeg {

// Built-in synthetic tasks.
//
//  - RedIsolated: binary graph classification. Erdos-Renyi graphs (n = 50,
//    p = 0.1) with a few extra vertices forced to be isolated; each vertex is
//    "red" with probability 0.3. Label 1 iff exactly one red vertex is
//    isolated. Rejection sampling balances the classes 50/50.
//  - WalkStart / WalkEnd / WalkClosed / WalkBetween: graph regression on
//    directed Erdos-Renyi graphs (n = 10, p = 0.1). The target counts walks of
//    a fixed length (default 2) that respectively start at a red vertex, end
//    at a red vertex, start and end at the same red vertex, or go from a red
//    vertex to a red vertex.
//  - RedCount: three-class classification on small random graphs; the label
//    is the number of red vertices capped at 2. Exists mainly as a compact
//    multiclass training target.
//  - CoordinatePair: two graphs on the four points (+-1, +-1) with features
//    (x, y); one connects the two diagonal points, the other the two
//    anti-diagonal points. No single vertex-feature threshold separates them.
//  - RegularPair: two 4-regular circulant graphs on 8 vertices, one with
//    chords at distances {1,2} (many triangles) and one at {1,3} (none).
enum class SynthKind {
  RedIsolated,
  WalkStart,
  WalkEnd,
  WalkClosed,
  WalkBetween,
  RedCount,
  CoordinatePair,
  RegularPair,
};

std::string synth_kind_name(SynthKind kind);
SynthKind synth_kind_from_name(const std::string& name);
bool synth_is_regression(SynthKind kind);

// Vertex colors are encoded in the feature matrix: column 0 is the constant
// 1 feature, column 1 is the red indicator (RedIsolated and the walk tasks).
// CoordinatePair uses coordinates as its two features; RegularPair only the
// constant.
GraphDataset make_synth_dataset(SynthKind kind, int count, std::uint64_t seed, int walk_len = 2);

}  // namespace treeg
