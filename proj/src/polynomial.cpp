#include "feigdim/polynomial.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "feigdim/solver.hpp"

namespace feigdim {

std::string MapPolynomial::default_path() {
    return std::string(FEIGDIM_DATA_DIR) + "/feigenbaum_map.txt";
}

MapPolynomial MapPolynomial::load(const std::string& path) {
    const std::string p = path.empty() ? default_path() : path;
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open map coefficient file: " + p);

    std::string line;
    if (!std::getline(in, line) || line.rfind("degree ", 0) != 0)
        throw std::runtime_error("map data: missing degree header");
    if (std::atoi(line.c_str() + 7) != 2 * kOrder)
        throw std::runtime_error("map data: unsupported degree (want 80)");

    MapPolynomial poly;
    std::uint64_t h = 1469598103934665603ULL;
    for (int i = 0; i <= kOrder; ++i) {
        if (!std::getline(in, line))
            throw std::runtime_error("map data: truncated coefficient list");
        h = fnv1a64(line + "\n", h);
        char* end = nullptr;
        poly.a[std::size_t(i)] = std::strtod(line.c_str(), &end);
        if (end == line.c_str())
            throw std::runtime_error("map data: unparsable coefficient line");
    }
    if (!std::getline(in, line) || line.rfind("checksum ", 0) != 0)
        throw std::runtime_error("map data: missing checksum line");
    const std::uint64_t want = std::strtoull(line.c_str() + 9, nullptr, 16);
    if (want != h)
        throw std::runtime_error("map data: checksum mismatch (corrupted file?)");
    poly.checksum = h;
    poly.finalize();
    return poly;
}

void MapPolynomial::finalize() {
    for (int i = 0; i <= kOrder; ++i) {
        const double m = std::fabs(a[std::size_t(i)]);
        abs_a_[std::size_t(i)] = m;
        wilk_a_[std::size_t(i)] = mul_up(3.0 * i + 2.0, m);
    }
    for (int j = 0; j < kOrder; ++j) {
        d1[std::size_t(j)] = 2.0 * (j + 1) * a[std::size_t(j + 1)];
        const double m = std::fabs(d1[std::size_t(j)]);
        abs_d1_[std::size_t(j)] = up(m);  // representation slack
        wilk_d1_[std::size_t(j)] = mul_up(3.0 * j + 4.0, m);
    }
    for (int j = 0; j < kOrder; ++j) {
        d2[std::size_t(j)] = (2.0 * j + 1.0) * d1[std::size_t(j)];
        const double m = std::fabs(d2[std::size_t(j)]);
        abs_d2_[std::size_t(j)] = up(up(m));
        wilk_d2_[std::size_t(j)] = mul_up(3.0 * j + 5.0, m);
    }
}

}  // namespace feigdim
