#pragma once

#include "levelforge/oracle.hpp"
#include "levelforge/problems.hpp"

#include <iosfwd>
#include <stdexcept>

namespace levelforge {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Binary container: "LVLF", u16 version (1), u64 rows, u64 cols, then
/// rows*cols f64 in row-major order. Everything little-endian.
void write_lvlf(std::ostream& os, const Matrix& m);
[[nodiscard]] Matrix read_lvlf(std::istream& is);

/// Matrix Market "array real general" (column-major payload).
void write_matrix_market(std::ostream& os, const Matrix& m);
[[nodiscard]] Matrix read_matrix_market(std::istream& is);

/// ASCII PGM (P2, maxval 255), values clamped to [0, 1] and scaled.
void write_pgm(std::ostream& os, const Vector& image, ImageDims dims);
/// Reads a P2 file back into [0, 1] values.
[[nodiscard]] Vector read_pgm(std::istream& is, ImageDims& dims);

}  // namespace levelforge
