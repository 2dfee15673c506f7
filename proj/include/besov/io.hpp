#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "besov/grid.hpp"
#include "besov/hsample.hpp"
#include "besov/regions.hpp"
#include "besov/seminorm.hpp"

// stable key order everywhere; results must be byte-reproducible
#include "json.hpp"

namespace besov {

using ojson = nlohmann::ordered_json;

// p and q serialize as numbers, with "inf" for the distinguished value
ojson exponent_to_json(double p);
double exponent_from_json(const ojson& j, const std::string& field);

ojson grid_to_json(const Grid& g);
Grid grid_from_json(const ojson& j);

ojson region_to_json(const Region& r);
Region region_from_json(const ojson& j);

ojson hsample_info_to_json(const HSampleInfo& i);
ojson besov_params_to_json(const BesovParams& bp);
BesovParams besov_params_from_json(const ojson& j);

ojson function_spec_to_json(const FunctionSpec& s);
FunctionSpec function_spec_from_json(const ojson& j);

// FNV-1a 64 of the canonical dump, as fixed-width hex
std::string config_hash(const ojson& config);

// RFC-4180: fields holding comma, quote, CR or LF are quoted, quotes doubled
std::string csv_escape(const std::string& field);

struct CsvWriter {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  void write() const;
};

std::string format_double(double v);  // shortest round-trip, stable

void ensure_directory(const std::string& dir);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace besov
