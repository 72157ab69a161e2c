// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include "wavemap/grid_field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavemap {

static_assert(std::endian::native == std::endian::little,
              "GFLD writer assumes a little-endian host");

GridField::GridField(int exponent, double fill) : exponent_(exponent) {
    if (exponent < 0 || exponent > 15)
        throw std::invalid_argument("GridField: exponent out of range");
    values_.assign(side() * side(), fill);
}

GridField::GridField(int exponent, std::vector<double> values)
    : exponent_(exponent), values_(std::move(values)) {
    if (exponent < 0 || exponent > 15)
        throw std::invalid_argument("GridField: exponent out of range");
    if (values_.size() != side() * side())
        throw std::invalid_argument("GridField: value count does not match 4^N");
}

double field_mean(const GridField& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s / static_cast<double>(f.size());
}

double field_min(const GridField& f) {
    return *std::min_element(f.values().begin(), f.values().end());
}

double field_max(const GridField& f) {
    return *std::max_element(f.values().begin(), f.values().end());
}

double max_abs_diff(const GridField& a, const GridField& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("max_abs_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

GridField sample_field(int exponent, const std::function<double(double, double)>& f) {
    GridField out(exponent);
    const double h = out.cell_width();
    for (std::size_t k = 0; k < out.side(); ++k)
        for (std::size_t n = 0; n < out.side(); ++n)
            out(k, n) = f(static_cast<double>(k) * h, static_cast<double>(n) * h);
    return out;
}

GridField sample_field_centers(int exponent, const std::function<double(double, double)>& f) {
    GridField out(exponent);
    const double h = out.cell_width();
    for (std::size_t k = 0; k < out.side(); ++k)
        for (std::size_t n = 0; n < out.side(); ++n)
            out(k, n) = f((static_cast<double>(k) + 0.5) * h, (static_cast<double>(n) + 0.5) * h);
    return out;
}

void write_csv(const GridField& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    os.precision(17);
    for (std::size_t k = 0; k < f.side(); ++k) {
        for (std::size_t n = 0; n < f.side(); ++n) {
            if (n) os << ',';
            os << f(k, n);
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("write_csv: write failed for " + path);
}

GridField read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path);
    std::vector<double> vals;
    std::size_t rows = 0, cols = 0;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::size_t c = 0;
        while (std::getline(ss, tok, ',')) {
            vals.push_back(std::stod(tok));
            ++c;
        }
        if (rows == 0) cols = c;
        else if (c != cols) throw std::runtime_error("read_csv: ragged rows in " + path);
        ++rows;
    }
    if (rows != cols || rows == 0 || (rows & (rows - 1)) != 0)
        throw std::runtime_error("read_csv: grid must be square with power-of-two side");
    int n = std::countr_zero(rows);
    return GridField(n, std::move(vals));
}

void write_gfld(const GridField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_gfld: cannot open " + path);
    os.write("GFLD", 4);
    std::uint32_t n = static_cast<std::uint32_t>(f.exponent());
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(f.values().data()),
             static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_gfld: write failed for " + path);
}

GridField read_gfld(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_gfld: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "GFLD", 4) != 0)
        throw std::runtime_error("read_gfld: bad magic in " + path);
    std::uint32_t n = 0;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!is || n > 15) throw std::runtime_error("read_gfld: bad exponent in " + path);
    std::size_t count = (std::size_t{1} << n) * (std::size_t{1} << n);
    std::vector<double> vals(count);
    is.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw std::runtime_error("read_gfld: truncated file " + path);
    return GridField(static_cast<int>(n), std::move(vals));
}

void write_field(const GridField& f, const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
        write_csv(f, path);
    else
        write_gfld(f, path);
}

GridField read_field(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
        return read_csv(path);
    return read_gfld(path);
}

}  // namespace wavemap
