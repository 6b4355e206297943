#include "feigdim/svg.hpp"

#include <array>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace feigdim {

namespace {

void appendf(std::string& out, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    out += buf;
}

// Reflected copies of a folded first-quadrant chain; each quadrant is drawn
// as its own open polyline (the closing axis segments are interior glue of
// the symmetric set, not boundary).
void append_region(std::string& out, const FoldedRegion& reg, const char* stroke) {
    const auto& chain = reg.base_chain();
    if (chain.empty()) return;
    const double s = reg.scale().lo;  // drawing only; certified width immaterial
    const double sx[4] = {1.0, -1.0, -1.0, 1.0};
    const double sy[4] = {1.0, 1.0, -1.0, -1.0};
    for (int q = 0; q < 4; ++q) {
        out += "<polyline fill=\"none\" stroke=\"";
        out += stroke;
        out += "\" stroke-width=\"0.35%\" points=\"";
        for (std::size_t i = 0; i < chain.size(); ++i)
            appendf(out, "%s%.6f,%.6f", i ? " " : "", sx[q] * s * chain[i].x,
                    sy[q] * s * chain[i].y);
        out += "\"/>\n";
    }
}

void append_axes_and_slits(std::string& out, const Domains& dom, double x0, double x1, double y0,
                           double y1) {
    appendf(out,
            "<line x1=\"%.6f\" y1=\"0\" x2=\"%.6f\" y2=\"0\" stroke=\"#888\" "
            "stroke-width=\"0.2%%\"/>\n",
            x0, x1);
    appendf(out,
            "<line x1=\"0\" y1=\"%.6f\" x2=\"0\" y2=\"%.6f\" stroke=\"#888\" "
            "stroke-width=\"0.2%%\"/>\n",
            y0, y1);
    // Escape slits on the real axis, clipped to the view.
    const double left = -dom.inv_lambda_lo(), right = dom.inv_l2_lo();
    if (left > x0)
        appendf(out,
                "<line x1=\"%.6f\" y1=\"0\" x2=\"%.6f\" y2=\"0\" stroke=\"#c22\" "
                "stroke-width=\"0.6%%\"/>\n",
                x0, left);
    if (right < x1)
        appendf(out,
                "<line x1=\"%.6f\" y1=\"0\" x2=\"%.6f\" y2=\"0\" stroke=\"#c22\" "
                "stroke-width=\"0.6%%\"/>\n",
                right, x1);
}

std::string document(double x0, double y0, double w, double h, const std::string& body) {
    std::string out;
    appendf(out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\"700\" "
            "viewBox=\"%.6f %.6f %.6f %.6f\">\n<g transform=\"scale(1,-1)\">\n",
            x0, -(y0 + h), w, h);
    out += body;
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace

std::string cover_svg(const Cover& cover, const Domains& dom) {
    const GridSpec& g = cover.grid;
    const double gx1 = g.ox + g.h * g.nx, gy1 = g.oy + g.h * g.ny;
    // Symmetric view with a margin.
    const double ex = 1.15 * gx1, ey = 1.12 * gy1;

    std::string body;
    // Cells, reflected into all four quadrants; adjacent cells in a row are
    // merged into one rectangle to keep files small.
    const double sx[4] = {1.0, -1.0, -1.0, 1.0};
    const double sy[4] = {1.0, 1.0, -1.0, -1.0};
    std::size_t i = 0;
    std::vector<std::array<double, 3>> runs;  // x start, y start, width (Q1)
    while (i < cover.cells.size()) {
        std::size_t j = i;
        while (j + 1 < cover.cells.size() && cover.cells[j + 1].first == cover.cells[j].first &&
               cover.cells[j + 1].second == cover.cells[j].second + 1)
            ++j;
        // cells are sorted by (ix, iy): vertical runs along y for fixed ix.
        const double x = g.ox + g.h * cover.cells[i].first;
        const double y = g.oy + g.h * cover.cells[i].second;
        runs.push_back({x, y, g.h * double(j - i + 1)});
        i = j + 1;
    }
    for (int q = 0; q < 4; ++q) {
        for (const auto& r : runs) {
            const double x = sx[q] > 0 ? r[0] : -(r[0] + cover.grid.h);
            const double y = sy[q] > 0 ? r[1] : -(r[1] + r[2]);
            appendf(body,
                    "<rect x=\"%.6f\" y=\"%.6f\" width=\"%.6f\" height=\"%.6f\" "
                    "fill=\"#4477aa\" fill-opacity=\"0.55\"/>\n",
                    x, y, cover.grid.h, r[2]);
        }
    }

    // Window outlines at the cover's natural scale.
    if (cover.target == CoverTarget::Xtilde) {
        append_region(body, dom.win(1), "#117733");
        append_region(body, dom.wout(1), "#999933");
    } else {
        append_region(body, dom.win(0), "#117733");
        append_region(body, dom.wout(0), "#999933");
    }
    append_axes_and_slits(body, dom, -ex, ex, -ey, ey);
    return document(-ex, -ey, 2 * ex, 2 * ey, body);
}

std::string domains_svg(const Domains& dom) {
    std::string body;
    append_region(body, dom.wout(0), "#999933");
    append_region(body, dom.win(0), "#117733");
    append_region(body, dom.wout(1), "#aa7744");
    append_region(body, dom.win(1), "#44aa77");
    append_region(body, dom.hout1(), "#4477aa");
    append_region(body, dom.pout_region(), "#aa4477");
    const double ex = 3.4, ey = 3.4;
    append_axes_and_slits(body, dom, -ex, ex, -ey, ey);
    return document(-ex, -ey, 2 * ex, 2 * ey, body);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace feigdim
