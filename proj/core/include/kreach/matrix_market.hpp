#pragma once

#include <string>

#include "kreach/sparse.hpp"

namespace kreach {

// Reads a Matrix Market coordinate file (field `real`, symmetry `general`
// or `symmetric`). Symmetric storage is expanded to the full pattern;
// duplicate entries are summed per the format convention. Throws
// std::runtime_error on malformed headers, out-of-bounds indices, or
// unsupported field/symmetry tags.
SparseMatrix load_matrix_market(const std::string& path);

// Writes coordinate/real/general with full 17-significant-digit entries so
// a round trip reproduces every value bit-exactly.
void save_matrix_market(const std::string& path, const SparseMatrix& m);

} // namespace kreach
