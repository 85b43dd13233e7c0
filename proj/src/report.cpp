#include "gjn/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gjn/errors.hpp"

namespace gjn {

std::string format12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  const double r = std::strtod(format12(v).c_str(), nullptr);
  return r == 0.0 ? 0.0 : r;  // drop negative zero
}

ojson num(double v) {
  if (!std::isfinite(v)) return format12(v);
  return round12(v);
}

ojson num_array(const Vec& v) {
  ojson a = ojson::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

ojson num_array(const std::vector<double>& v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
      out << content;
      out.flush();
      if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

void write_json(const std::filesystem::path& path, const ojson& j) { write_text_atomic(path, j.dump(2) + "\n"); }

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw InvalidInput("csv: row width does not match header");
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  auto line = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      if (cells[i].find_first_of(",\"\n") != std::string::npos) {
        s += '"';
        for (char c : cells[i]) {
          if (c == '"') s += '"';
          s += c;
        }
        s += '"';
      } else {
        s += cells[i];
      }
    }
    return s + "\n";
  };
  std::string out = line(header);
  for (const auto& r : rows) out += line(r);
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) { write_text_atomic(path, table.str()); }

}  // namespace gjn
