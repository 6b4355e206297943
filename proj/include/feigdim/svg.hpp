#pragma once
// Deterministic vector rendering of covers and window geometry. Output is
// a pure function of the inputs (fixed decimal formatting, no timestamps),
// so repeated runs produce byte-identical files.

#include <string>

#include "feigdim/cover.hpp"
#include "feigdim/domains.hpp"

namespace feigdim {

// SVG document showing the cover's cells (row-wise run-length merged into
// rectangles) over the window outlines at the cover's natural scale, with
// the coordinate axes. An empty cover yields a valid document with axes and
// outlines only.
std::string cover_svg(const Cover& cover, const Domains& dom);

// Window geometry alone: inner/outer window chains at unit and lambda scale,
// the escape slits, and the axes.
std::string domains_svg(const Domains& dom);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace feigdim
