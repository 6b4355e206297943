#include "feigdim/cover.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "feigdim/roundoff.hpp"

namespace feigdim {

double GridSpec::disk_radius_up() const {
    // sqrt(0.5) is correctly rounded, so one ulp up dominates the true value.
    return mul_up(h, std::nextafter(std::sqrt(0.5), 2.0));
}

C GridSpec::center(int ix, int iy) const {
    const double half = 0.5 * h;  // exact: h is dyadic
    return {ox + double(2 * ix + 1) * half, oy + double(2 * iy + 1) * half};
}

Ball GridSpec::cell_ball(int ix, int iy) const { return {center(ix, iy), disk_radius_up()}; }

GridSpec GridSpec::refined(int factor) const {
    if (factor < 1 || (factor & (factor - 1)) != 0)
        throw std::invalid_argument("GridSpec::refined: factor must be a power of two");
    GridSpec g = *this;
    g.h = h / double(factor);  // exact: dyadic by a power of two
    g.nx = nx * factor;
    g.ny = ny * factor;
    return g;
}

namespace {

// Extent of a chain-bounded first-quadrant region, scaled and rounded out.
std::pair<double, double> chain_extent_up(const FoldedRegion& region, double scale_up) {
    double mx = 0.0, my = 0.0;
    for (const Pt& p : region.base_chain()) {
        mx = std::max(mx, p.x);
        my = std::max(my, p.y);
    }
    return {mul_up(mx, scale_up), mul_up(my, scale_up)};
}

GridSpec grid_over(double extent_x, double extent_y, int spacing_exp) {
    GridSpec g;
    g.h = std::ldexp(1.0, -spacing_exp);
    g.nx = int(std::ceil(div_up(extent_x, g.h)));
    g.ny = int(std::ceil(div_up(extent_y, g.h)));
    if (g.nx <= 0 || g.ny <= 0) throw std::invalid_argument("grid_over: empty extent");
    return g;
}

}  // namespace

GridSpec unit_window_grid(const Domains& dom, int spacing_exp) {
    const auto [ex, ey] = chain_extent_up(dom.pout_region(), 1.0);
    return grid_over(ex, ey, spacing_exp);
}

GridSpec scaled_window_grid(const Map& map, const Domains& dom, int spacing_exp) {
    const double lam_up = map.consts.lambda.to_interval().hi;
    const auto [ex, ey] = chain_extent_up(dom.pout_region(), lam_up);
    return grid_over(ex, ey, spacing_exp);
}

bool Cover::contains(int ix, int iy) const {
    return std::binary_search(cells.begin(), cells.end(), std::pair<int, int>{ix, iy});
}

AreaBound area_bound(const Cover& cover) {
    AreaBound ab;
    ab.cell_count = (long long)(cover.cells.size());
    ab.cell_area = cover.grid.h * cover.grid.h;  // exact for dyadic h
    const double count = double(ab.cell_count);
    ab.bound = cover.kind == CoverKind::UpperCover ? mul_up(count, ab.cell_area)
                                                   : mul_dn(count, ab.cell_area);
    return ab;
}

void StepErrorLedger::record(int steps, double value_r, double deriv_r) {
    if (steps < 0) return;
    const std::size_t k = std::size_t(steps);
    if (eps.size() <= k) {
        eps.resize(k + 1, 0.0);
        delta.resize(k + 1, 0.0);
    }
    eps[k] = std::max(eps[k], value_r);
    delta[k] = std::max(delta[k], deriv_r);
}

void StepErrorLedger::merge(const StepErrorLedger& other) {
    for (std::size_t k = 0; k < other.eps.size(); ++k) record(int(k), other.eps[k], other.delta[k]);
}

namespace {

const char* kind_name(CoverKind k) {
    return k == CoverKind::UpperCover ? "upper" : "packing";
}
const char* target_name(CoverTarget t) {
    switch (t) {
        case CoverTarget::Xtilde: return "xtilde";
        case CoverTarget::Sigma: return "sigma";
        case CoverTarget::P0: return "p0";
    }
    throw std::logic_error("target_name");
}

CoverKind parse_kind(const std::string& s) {
    if (s == "upper") return CoverKind::UpperCover;
    if (s == "packing") return CoverKind::LowerPacking;
    throw std::runtime_error("cover file: unknown kind '" + s + "'");
}
CoverTarget parse_target(const std::string& s) {
    if (s == "xtilde") return CoverTarget::Xtilde;
    if (s == "sigma") return CoverTarget::Sigma;
    if (s == "p0") return CoverTarget::P0;
    throw std::runtime_error("cover file: unknown target '" + s + "'");
}

std::string hex_double(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double parse_hex_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::runtime_error("cover file: bad float field '" + s + "'");
    return v;
}

std::string expect_field(std::istream& in, const char* name) {
    std::string key, value;
    if (!(in >> key)) throw std::runtime_error(std::string("cover file: missing field ") + name);
    if (key != name)
        throw std::runtime_error("cover file: expected field '" + std::string(name) + "', got '" +
                                 key + "'");
    if (!(in >> value)) throw std::runtime_error("cover file: truncated field " + key);
    return value;
}

}  // namespace

std::string cover_to_text(const Cover& cover) {
    std::ostringstream out;
    out << "feigdim-cover v1\n";
    out << "kind " << kind_name(cover.kind) << "\n";
    out << "target " << target_name(cover.target) << "\n";
    out << "n " << cover.n << "\n";
    out << "K " << cover.max_iter << "\n";
    out << "origin " << hex_double(cover.grid.ox) << " " << hex_double(cover.grid.oy) << "\n";
    out << "spacing " << hex_double(cover.grid.h) << "\n";
    out << "extent " << cover.grid.nx << " " << cover.grid.ny << "\n";
    char sum[24];
    std::snprintf(sum, sizeof sum, "%016llx", (unsigned long long)(cover.coeff_checksum));
    out << "coeffs " << sum << "\n";
    out << "cells " << cover.cells.size() << "\n";
    for (const auto& [ix, iy] : cover.cells) out << ix << " " << iy << "\n";
    return out.str();
}

Cover cover_from_text(std::istream& in) {
    std::string magic, version;
    if (!(in >> magic >> version) || magic != "feigdim-cover" || version != "v1")
        throw std::runtime_error("cover file: bad magic line");
    Cover c;
    c.kind = parse_kind(expect_field(in, "kind"));
    c.target = parse_target(expect_field(in, "target"));
    c.n = std::stoi(expect_field(in, "n"));
    c.max_iter = std::stoi(expect_field(in, "K"));
    std::string key;
    if (!(in >> key) || key != "origin") throw std::runtime_error("cover file: expected origin");
    std::string sx, sy;
    if (!(in >> sx >> sy)) throw std::runtime_error("cover file: truncated origin");
    c.grid.ox = parse_hex_double(sx);
    c.grid.oy = parse_hex_double(sy);
    c.grid.h = parse_hex_double(expect_field(in, "spacing"));
    if (!(in >> key) || key != "extent") throw std::runtime_error("cover file: expected extent");
    if (!(in >> c.grid.nx >> c.grid.ny)) throw std::runtime_error("cover file: truncated extent");
    const std::string sum = expect_field(in, "coeffs");
    c.coeff_checksum = std::strtoull(sum.c_str(), nullptr, 16);
    const long long count = std::stoll(expect_field(in, "cells"));
    if (count < 0) throw std::runtime_error("cover file: negative cell count");
    c.cells.reserve(std::size_t(count));
    for (long long i = 0; i < count; ++i) {
        int ix = 0, iy = 0;
        if (!(in >> ix >> iy)) throw std::runtime_error("cover file: truncated cell list");
        if (ix < 0 || iy < 0 || ix >= c.grid.nx || iy >= c.grid.ny)
            throw std::runtime_error("cover file: cell index out of extent");
        c.cells.emplace_back(ix, iy);
    }
    if (!std::is_sorted(c.cells.begin(), c.cells.end()))
        throw std::runtime_error("cover file: cells not sorted");
    return c;
}

void save_cover(const Cover& cover, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep "\n" byte-exact
    if (!out) throw std::runtime_error("save_cover: cannot open " + path);
    out << cover_to_text(cover);
    if (!out) throw std::runtime_error("save_cover: write failed for " + path);
}

Cover load_cover(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_cover: cannot open " + path);
    return cover_from_text(in);
}

}  // namespace feigdim
