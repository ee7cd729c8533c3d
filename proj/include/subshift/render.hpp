#pragma once

#include <cstdint>
#include <string>

#include "subshift/coloring.hpp"

namespace subshift {

// Plain-text PGM raster of a planar window.  The window must be a full
// rectangle in Z^2; rows run top to bottom with y increasing downward.
// Samples: defined 0 -> 0, defined 1 -> 2, undefined -> 1.
std::string render_pgm(const PartialColoring& w);

// DOT digraph of the radius-r Cayley ball of a free group.  Nodes appear
// in enumeration order, labelled "word=value"; cells the window leaves
// undefined are drawn dashed with value "?".  Edges follow the tree from
// each word to its one-letter extensions.
std::string render_dot(const PartialColoring& w, int64_t radius);

}  // namespace subshift
