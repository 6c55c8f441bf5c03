#pragma once

#include <Eigen/Dense>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "longwave/errors.hpp"

namespace longwave::io {

// CSV with a mandatory header row; numeric cells are decimal floating point
// written with 17 significant digits so write/read round-trips are lossless.

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Csv {
  std::vector<std::string> header;
  Eigen::MatrixXd data;  // rows x cols
};

inline Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open input file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw UserError("empty CSV (header row required): " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  Csv csv;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) csv.header.push_back(cell);
  }
  const std::size_t cols = csv.header.size();
  if (cols == 0) throw UserError("CSV header has no columns: " + path);

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw UserError("malformed numeric cell '" + cell + "' in " + path);
      }
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size()) throw UserError("malformed numeric cell '" + cell + "' in " + path);
      values.push_back(v);
      ++c;
    }
    if (c != cols) {
      throw UserError("CSV row " + std::to_string(rows + 2) + " has " + std::to_string(c) +
                      " cells, expected " + std::to_string(cols) + ": " + path);
    }
    ++rows;
  }
  csv.data.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      csv.data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * cols + c];
    }
  }
  return csv;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UserError("cannot open output file for writing: " + path);
  return out;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const Eigen::MatrixXd& data) {
  std::ofstream out = open_output(path);
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << header[c];
  }
  out << "\n";
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      out << (c ? "," : "") << fmt17(data(r, c));
    }
    out << "\n";
  }
  if (!out) throw UserError("write failed: " + path);
}

}  // namespace longwave::io
