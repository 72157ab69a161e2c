// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace wavemap {

/// Scalar field sampled on a uniform 2^N x 2^N grid over [0,1]^2.
///
/// value(k, n) holds f(k * 2^-N, n * 2^-N), with k the x index and n the
/// y index.  Cell (k, n) is the half-open dyadic square of side 2^-N whose
/// lower-left corner is that sample point; piecewise-constant fields carry
/// the cell's value in that slot, so the integral over [0,1]^2 equals the
/// mean of the stored values.
class GridField {
public:
    GridField() = default;
    explicit GridField(int exponent, double fill = 0.0);
    GridField(int exponent, std::vector<double> values);

    int exponent() const { return exponent_; }
    std::size_t side() const { return std::size_t{1} << exponent_; }
    std::size_t size() const { return values_.size(); }
    double cell_width() const { return 1.0 / static_cast<double>(side()); }

    double& operator()(std::size_t k, std::size_t n) { return values_[k * side() + n]; }
    double operator()(std::size_t k, std::size_t n) const { return values_[k * side() + n]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

private:
    int exponent_ = 0;
    std::vector<double> values_ = std::vector<double>(1, 0.0);
};

double field_mean(const GridField& f);
double field_min(const GridField& f);
double field_max(const GridField& f);
double max_abs_diff(const GridField& a, const GridField& b);

/// Samples f(x, y) at the lower-left corner of every cell.
GridField sample_field(int exponent, const std::function<double(double, double)>& f);
/// Samples f(x, y) at cell centers.
GridField sample_field_centers(int exponent, const std::function<double(double, double)>& f);

// File formats.  CSV is a plain matrix, row k = x index.  The binary format
// is magic "GFLD", a little-endian u32 exponent N, then 4^N little-endian
// f64 values in row-major (k, n) order.
void write_csv(const GridField& f, const std::string& path);
GridField read_csv(const std::string& path);
void write_gfld(const GridField& f, const std::string& path);
GridField read_gfld(const std::string& path);

/// Reads/writes either format, picking by file suffix (".csv" vs anything else).
void write_field(const GridField& f, const std::string& path);
GridField read_field(const std::string& path);

}  // namespace wavemap
