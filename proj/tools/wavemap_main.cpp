// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include <cstdio>

int main() {
    std::puts("wavemap CLI placeholder");
    return 0;
}
