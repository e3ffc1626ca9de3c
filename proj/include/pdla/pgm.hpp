/*
 * Binary PGM (P5) image I/O. Writing maps [0,1] linearly onto the integer
 * range with round-half-to-even and clamps out-of-range values (flagged);
 * reading maps back by division. Files are written atomically
 * (write-temp-then-rename).
 */
#pragma once

#include <string>

#include "pdla/field.hpp"

namespace pdla {

struct PgmWriteInfo {
    bool clamped = false;  // some input values fell outside [0, 1]
};

PgmWriteInfo write_pgm(const RealField& image, const std::string& path,
                       int maxval = 255);

RealField read_pgm(const std::string& path);

}  // namespace pdla
