// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include "wavemap/raster.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

#include <png.h>

namespace wavemap {

void write_png(const GridField& f, const std::string& path) {
    const std::size_t side = f.side();
    const double lo = field_min(f), hi = field_max(f);
    const double span = hi - lo;

    std::vector<png_byte> pixels(side * side);
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const double v = f(c, side - 1 - r);  // x right, y up
            const double t = span > 0.0 ? (v - lo) / span : 0.5;
            pixels[r * side + c] = static_cast<png_byte>(255.0 * t + 0.5);
        }
    }

    std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "wb"),
                                                       &std::fclose);
    if (!fp) throw std::runtime_error("write_png: cannot open " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("write_png: libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("write_png: libpng info init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("write_png: libpng error for " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(side), static_cast<png_uint_32>(side), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t r = 0; r < side; ++r)
        png_write_row(png, pixels.data() + r * side);
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);

    std::ofstream sidecar(path + ".range.txt");
    sidecar.precision(17);
    sidecar << lo << ' ' << hi << '\n';
}

}  // namespace wavemap
