#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "gjn/network.hpp"

namespace gjn {

using ojson = nlohmann::ordered_json;

/// Rounds to 12 significant digits (through the %.12g text form).
double round12(double v);

/// JSON number at 12 significant digits; non-finite values become the
/// strings "inf", "-inf" or "nan".
ojson num(double v);
ojson num_array(const Vec& v);
ojson num_array(const std::vector<double>& v);

std::string format12(double v);

/// Writes through a temporary file in the same directory and renames it into
/// place; on failure the temporary is removed and std::runtime_error thrown.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Pretty-printed with two-space indent and a trailing newline.
void write_json(const std::filesystem::path& path, const ojson& j);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string str() const;
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace gjn
