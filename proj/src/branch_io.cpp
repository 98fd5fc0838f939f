#include "zetadyn/branch_io.hpp"

#include <fstream>
#include <sstream>

namespace zetadyn::io {

using mp::Complex;
using mp::Real;

namespace {

mpfr_prec_t prec_for_digits(long digits) { return PrecisionContext::make(std::max(30L, digits)).prec(); }

Real parse_real(const std::string& tok, mpfr_prec_t prec, long line_no) {
  try {
    return Real(tok, prec);
  } catch (const Error&) {
    throw ParseError("unparsable number '" + tok + "'", line_no);
  }
}

}  // namespace

void write_branch(const orbit::Branch& b, const std::string& path,
                  const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw Error("write_branch: cannot open " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "root= " << b.root.re().str() << " " << b.root.im().str() << " anchorL= "
      << b.anchor.length() << " digits= " << b.digits << " length= " << b.length() << "\n";
  out << "# first_anchor_index= " << b.first_anchor_index << "\n";
  for (const auto& a : b.anchor.elements) out << "anchor " << a.re().str() << " " << a.im().str() << "\n";
  for (long k = 0; k < b.length(); ++k) {
    out << b.elements[k].re().str() << " " << b.elements[k].im().str() << " "
        << b.residuals[k].str() << "\n";
  }
}

orbit::Branch read_branch(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_branch: cannot open " + path);
  orbit::Branch b;
  std::string line;
  long line_no = 0;
  long declared_len = -1;
  long anchor_len = -1;
  mpfr_prec_t prec = 64;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream is(line.substr(1));
      std::string key;
      is >> key;
      if (key == "first_anchor_index=") is >> b.first_anchor_index;
      continue;
    }
    std::istringstream is(line);
    if (!have_header) {
      std::string k1, re, im, k2, k3, k4;
      long L = 0, digits = 0, len = 0;
      is >> k1 >> re >> im >> k2 >> L >> k3 >> digits >> k4 >> len;
      if (k1 != "root=" || k2 != "anchorL=" || k3 != "digits=" || k4 != "length=" || is.fail())
        throw ParseError("malformed branch header", line_no);
      b.digits = digits;
      prec = prec_for_digits(digits);
      b.root = Complex{parse_real(re, prec, line_no), parse_real(im, prec, line_no)};
      declared_len = len;
      anchor_len = L;
      have_header = true;
      continue;
    }
    std::string first;
    is >> first;
    if (first == "anchor") {
      std::string re, im;
      is >> re >> im;
      if (is.fail()) throw ParseError("malformed anchor line", line_no);
      b.anchor.elements.push_back(Complex{parse_real(re, prec, line_no), parse_real(im, prec, line_no)});
      continue;
    }
    std::string im, resid;
    is >> im >> resid;
    if (is.fail()) throw ParseError("malformed element line", line_no);
    b.elements.push_back(Complex{parse_real(first, prec, line_no), parse_real(im, prec, line_no)});
    b.residuals.push_back(parse_real(resid, prec, line_no));
  }
  if (!have_header) throw ParseError("missing branch header", 0);
  if (b.anchor.length() != anchor_len) throw ParseError("anchor count mismatch", line_no);
  if (b.length() != declared_len) throw ParseError("element count mismatch", line_no);
  b.anchor.residual = Real(0.0, 64);
  b.verified_len = b.length();
  b.deriv_log10.assign(b.length(), 0.0);
  return b;
}

std::vector<std::string> read_ordinates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_ordinates: cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string tok;
    std::istringstream is(line);
    if (!(is >> tok)) continue;  // blank
    if (tok[0] == '#') continue;
    for (char ch : tok)
      if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '+' ||
            ch == 'e' || ch == 'E'))
        throw ParseError("unparsable ordinate '" + tok + "'", line_no);
    std::string extra;
    if (is >> extra) throw ParseError("trailing tokens after ordinate", line_no);
    out.push_back(tok);
  }
  return out;
}

void write_zero_table(const std::vector<ZeroEntry>& table, long digits, const std::string& path,
                      const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw Error("write_zero_table: cannot open " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "digits= " << digits << " count= " << table.size() << "\n";
  for (const auto& e : table)
    out << e.rho.re().str() << " " << e.rho.im().str() << " " << e.residual.str() << "\n";
}

std::vector<ZeroEntry> read_zero_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_zero_table: cannot open " + path);
  std::vector<ZeroEntry> out;
  std::string line;
  long line_no = 0;
  long digits = 0;
  bool have_header = false;
  mpfr_prec_t prec = 64;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    if (!have_header) {
      std::string k1, k2;
      long count = 0;
      is >> k1 >> digits >> k2 >> count;
      if (k1 != "digits=" || k2 != "count=" || is.fail())
        throw ParseError("malformed zero table header", line_no);
      prec = prec_for_digits(digits);
      have_header = true;
      continue;
    }
    std::string re, im, resid;
    is >> re >> im >> resid;
    if (is.fail()) throw ParseError("malformed zero line", line_no);
    out.push_back({Complex{parse_real(re, prec, line_no), parse_real(im, prec, line_no)},
                   parse_real(resid, prec, line_no)});
  }
  return out;
}

void write_point_table(const std::vector<Complex>& pts, long digits, const std::string& path,
                       const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) throw Error("write_point_table: cannot open " + path);
  for (const auto& c : comments) out << "# " << c << "\n";
  out << "digits= " << digits << " count= " << pts.size() << "\n";
  for (const auto& z : pts) out << z.re().str() << " " << z.im().str() << "\n";
}

std::vector<Complex> read_point_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_point_table: cannot open " + path);
  std::vector<Complex> out;
  std::string line;
  long line_no = 0;
  bool have_header = false;
  mpfr_prec_t prec = 64;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    if (!have_header) {
      std::string k1, k2;
      long digits = 0, count = 0;
      is >> k1 >> digits >> k2 >> count;
      if (k1 != "digits=" || k2 != "count=" || is.fail())
        throw ParseError("malformed point table header", line_no);
      prec = prec_for_digits(digits);
      have_header = true;
      continue;
    }
    std::string re, im;
    is >> re >> im;
    if (is.fail()) throw ParseError("malformed point line", line_no);
    out.push_back(Complex{parse_real(re, prec, line_no), parse_real(im, prec, line_no)});
  }
  return out;
}

}  // namespace zetadyn::io
