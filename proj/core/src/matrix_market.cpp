#include "kreach/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kreach {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

} // namespace

SparseMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");

  std::string header;
  if (!std::getline(in, header)) fail(path, "empty file");
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket") fail(path, "malformed header banner");
  if (lower(object) != "matrix" || lower(format) != "coordinate")
    fail(path, "only coordinate matrices are supported");
  if (lower(field) != "real") fail(path, "only the real field is supported");
  const std::string sym = lower(symmetry);
  if (sym != "general" && sym != "symmetric")
    fail(path, "only general or symmetric symmetry is supported");

  std::string line;
  Index rows = -1, cols = -1;
  long long declared = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    if (!(ls >> rows >> cols >> declared)) fail(path, "malformed size line");
    break;
  }
  if (rows < 0 || cols < 0 || declared < 0) fail(path, "missing size line");
  if (sym == "symmetric" && rows != cols)
    fail(path, "symmetric matrices must be square");

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(declared));
  long long seen = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    long long i = 0, j = 0;
    double value = 0.0;
    if (!(ls >> i >> j >> value)) fail(path, "malformed entry line: " + line);
    if (i < 1 || i > rows || j < 1 || j > cols)
      fail(path, "entry index out of bounds: " + line);
    triplets.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), value});
    if (sym == "symmetric" && i != j)
      triplets.push_back({static_cast<Index>(j - 1), static_cast<Index>(i - 1), value});
    ++seen;
  }
  if (seen != declared) fail(path, "entry count does not match the size line");

  return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

void save_matrix_market(const std::string& path, const SparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  const std::vector<Triplet> triplets = m.to_triplets();
  out << m.rows() << " " << m.cols() << " " << triplets.size() << "\n";
  char buf[96];
  for (const Triplet& t : triplets) {
    std::snprintf(buf, sizeof(buf), "%lld %lld %.17g\n",
                  static_cast<long long>(t.row + 1),
                  static_cast<long long>(t.col + 1), t.value);
    out << buf;
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

} // namespace kreach
