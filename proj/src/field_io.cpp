#include "meanfield/field_io.hpp"

#include "meanfield/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace meanfield {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& os, const RadialField& u) {
  os << "r,value\n";
  const auto r = u.grid().nodes();
  for (std::size_t i = 0; i < u.size(); ++i) os << format_real(r[i]) << ',' << format_real(u[i]) << '\n';
}

namespace {

double parse_number(const std::string& tok, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size())
    throw IoError("line " + std::to_string(line) + ": cannot parse number '" + tok + "'");
  return v;
}

} // namespace

RadialField read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty field CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,value") throw IoError("field CSV header must be 'r,value', got '" + line + "'");
  std::vector<double> r, v;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("line " + std::to_string(lineno) + ": expected two columns");
    r.push_back(parse_number(line.substr(0, comma), lineno));
    v.push_back(parse_number(line.substr(comma + 1), lineno));
  }
  return RadialField(RadialGrid::from_nodes(std::move(r)), std::move(v));
}

RadialField read_field_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_field_csv(in);
}

void write_field_csv_file(const std::string& path, const RadialField& u) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_field_csv(out, u);
  if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace meanfield
