#pragma once

#include <string>
#include <vector>

#include "zetadyn/orbit.hpp"

namespace zetadyn::io {

struct ParseError : Error {
  ParseError(const std::string& what, long line_no)
      : Error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
  long line;
};

/// Branch file: '#' comment lines, a header
///   root= <re> <im> anchorL= <L> digits= <d> length= <n>
/// anchor element lines 'anchor <re> <im>', then one full-precision
/// 're im residual' line per element. Round-trips bit-exactly.
void write_branch(const orbit::Branch& b, const std::string& path,
                  const std::vector<std::string>& comments = {});
orbit::Branch read_branch(const std::string& path);

/// Plain-text zero table input: one decimal ordinate per line (published-
/// table convention); blank lines ignored.
std::vector<std::string> read_ordinates(const std::string& path);

struct ZeroEntry {
  mp::Complex rho;
  mp::Real residual;
};

/// Refined zeros: full-precision 're im residual' lines.
void write_zero_table(const std::vector<ZeroEntry>& table, long digits, const std::string& path,
                      const std::vector<std::string>& comments = {});
std::vector<ZeroEntry> read_zero_table(const std::string& path);

/// Full-precision 're im' lines, one per fixed point.
void write_point_table(const std::vector<mp::Complex>& pts, long digits, const std::string& path,
                       const std::vector<std::string>& comments = {});
std::vector<mp::Complex> read_point_table(const std::string& path);

}  // namespace zetadyn::io
