#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "io/io.hpp"

namespace mordae {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix(const std::string& path, const Mat& M) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrC::io_error, "cannot open for writing: " + path);
  Eigen::Index nnz = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0) ++nnz;
  out << M.rows() << ' ' << M.cols() << ' ' << nnz << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0.0)
        out << (i + 1) << ' ' << (j + 1) << ' ' << fmt_double(M(i, j)) << '\n';
  if (!out) throw Error(ErrC::io_error, "write failed: " + path);
}

Mat read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrC::io_error, "cannot open for reading: " + path);
  long long rows = -1, cols = -1, nnz = -1;
  if (!(in >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
    throw Error(ErrC::parse_error, "malformed matrix header in " + path);
  if (rows > 100000 || cols > 100000 || rows * cols > 100000000)
    throw Error(ErrC::parse_error, "matrix dimensions in header exceed supported size in " + path);
  if (nnz > rows * cols)
    throw Error(ErrC::parse_error, "entry count exceeds matrix size in " + path);
  Mat M = Mat::Zero(rows, cols);
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(rows * cols), 0);
  for (long long k = 0; k < nnz; ++k) {
    long long i = 0, j = 0;
    std::string tok;
    if (!(in >> i >> j >> tok))
      throw Error(ErrC::parse_error, "truncated or malformed entry in " + path);
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw Error(ErrC::parse_error, "index out of range in " + path);
    const char* s = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
      throw Error(ErrC::parse_error, "malformed value '" + tok + "' in " + path);
    const std::size_t flat = static_cast<std::size_t>((i - 1) * cols + (j - 1));
    if (seen[flat]) throw Error(ErrC::duplicate_entry, "duplicate entry in " + path);
    seen[flat] = 1;
    M(i - 1, j - 1) = v;
  }
  std::string rest;
  if (in >> rest) throw Error(ErrC::parse_error, "trailing content in " + path);
  return M;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrC::io_error, "cannot open for reading: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrC::parse_error, path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrC::io_error, "cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrC::io_error, "write failed: " + path);
}

}  // namespace mordae
