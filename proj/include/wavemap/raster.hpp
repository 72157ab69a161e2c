// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#pragma once

#include <string>

#include "wavemap/grid_field.hpp"

namespace wavemap {

/// Writes an 8-bit grayscale PNG, linearly scaled between the field's min
/// and max (flat fields map to mid-gray); pixel rows run top-down in y.
/// The range used is recorded in a "<path>.range.txt" sidecar.
void write_png(const GridField& f, const std::string& path);

}  // namespace wavemap
