#include "besov/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace besov {

ojson exponent_to_json(double p) {
  if (std::isinf(p)) return ojson("inf");
  return ojson(p);
}

double exponent_from_json(const ojson& j, const std::string& field) {
  if (!j.contains(field)) throw std::invalid_argument("config: missing field '" + field + "'");
  const auto& v = j.at(field);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return inf();
    throw std::invalid_argument("config: field '" + field + "' must be a number or \"inf\"");
  }
  if (!v.is_number()) throw std::invalid_argument("config: field '" + field + "' must be a number or \"inf\"");
  return v.get<double>();
}

ojson grid_to_json(const Grid& g) {
  return ojson{{"n", g.n}, {"L", g.L}, {"N", g.N}, {"dx", g.dx}};
}

Grid grid_from_json(const ojson& j) {
  for (const char* k : {"n", "L", "N"})
    if (!j.contains(k)) throw std::invalid_argument(std::string("grid config: missing '") + k + "'");
  return build_grid(j.at("n").get<int>(), j.at("L").get<double>(), j.at("N").get<int>());
}

ojson region_to_json(const Region& r) {
  auto part_json = [&](const Region::Part& p) {
    if (p.kind == Region::Part::Ball) {
      ojson j{{"type", "ball"}, {"radius", p.r}};
      j["center"] = r.n == 1 ? ojson::array({p.c[0]}) : ojson::array({p.c[0], p.c[1]});
      return j;
    }
    ojson j{{"type", "box"}};
    j["lo"] = r.n == 1 ? ojson::array({p.lo[0]}) : ojson::array({p.lo[0], p.lo[1]});
    j["hi"] = r.n == 1 ? ojson::array({p.hi[0]}) : ojson::array({p.hi[0], p.hi[1]});
    return j;
  };
  if (r.parts.size() == 1) {
    ojson j = part_json(r.parts.front());
    j["n"] = r.n;
    return j;
  }
  ojson j{{"type", "union"}, {"n", r.n}};
  j["children"] = ojson::array();
  for (const auto& p : r.parts) j["children"].push_back(part_json(p));
  return j;
}

namespace {

std::array<double, 2> point_from_json(const ojson& j) {
  if (!j.is_array() || j.empty() || j.size() > 2)
    throw std::invalid_argument("region config: points must be arrays of 1 or 2 numbers");
  std::array<double, 2> p{0, 0};
  p[0] = j.at(0).get<double>();
  if (j.size() == 2) p[1] = j.at(1).get<double>();
  return p;
}

}  // namespace

Region region_from_json(const ojson& j) {
  if (!j.contains("type")) throw std::invalid_argument("region config: missing 'type'");
  const std::string type = j.at("type").get<std::string>();
  const int n = j.contains("n") ? j.at("n").get<int>()
                                : (j.contains("center") && j.at("center").size() == 2) ||
                                          (j.contains("lo") && j.at("lo").size() == 2)
                                      ? 2
                                      : 1;
  if (type == "ball") {
    return Region::ball(n, point_from_json(j.at("center")), j.at("radius").get<double>());
  }
  if (type == "box") {
    const auto lo = point_from_json(j.at("lo"));
    const auto hi = point_from_json(j.at("hi"));
    if (n == 1) return Region::interval(lo[0], hi[0]);
    return Region::box(lo, hi);
  }
  if (type == "union") {
    if (!j.contains("children") || j.at("children").empty())
      throw std::invalid_argument("region config: union needs children");
    std::vector<Region> rs;
    for (const auto& c : j.at("children")) {
      ojson cc = c;
      cc["n"] = n;
      rs.push_back(region_from_json(cc));
    }
    return Region::union_of(rs);
  }
  throw std::invalid_argument("region config: unknown type '" + type + "'");
}

ojson hsample_info_to_json(const HSampleInfo& i) {
  return ojson{{"n", i.n}, {"h_min", i.h_min}, {"h_max", i.h_max}, {"K", i.K}, {"M", i.M}};
}

ojson besov_params_to_json(const BesovParams& bp) {
  return ojson{{"alpha", bp.alpha}, {"p", exponent_to_json(bp.p)}, {"q", exponent_to_json(bp.q)}};
}

BesovParams besov_params_from_json(const ojson& j) {
  BesovParams bp;
  if (!j.contains("alpha")) throw std::invalid_argument("config: missing field 'alpha'");
  bp.alpha = j.at("alpha").get<double>();
  bp.p = exponent_from_json(j, "p");
  bp.q = j.contains("q") ? exponent_from_json(j, "q") : inf();
  bp.validate();
  return bp;
}

ojson function_spec_to_json(const FunctionSpec& s) {
  ojson j{{"family", s.family}};
  ojson params = ojson::object();
  for (const auto& [k, v] : s.params) params[k] = v;
  j["params"] = params;
  return j;
}

FunctionSpec function_spec_from_json(const ojson& j) {
  if (!j.contains("family")) throw std::invalid_argument("function config: missing 'family'");
  FunctionSpec s;
  s.family = j.at("family").get<std::string>();
  if (j.contains("params"))
    for (const auto& [k, v] : j.at("params").items()) s.params[k] = v.get<double>();
  return s;
}

std::string config_hash(const ojson& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return std::string(buf);
}

std::string csv_escape(const std::string& field) {
  const bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }

void CsvWriter::write() const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      os << csv_escape(cells[i]);
    }
    os << "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void ensure_directory(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_grid_function(const GridFunction& f, const std::string& basename, bool csv) {
  ojson header;
  header["n"] = f.grid.n;
  header["L"] = f.grid.L;
  header["N"] = f.grid.N;
  header["family"] = f.family;
  ojson params = ojson::object();
  for (const auto& [k, v] : f.params) params[k] = v;
  header["params"] = params;
  header["support_warning"] = f.support_warning;
  header["format"] = csv ? "csv" : "bin";
  write_text_file(basename + ".json", header.dump(2) + "\n");

  if (csv) {
    std::ofstream os(basename + ".csv", std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + basename + ".csv'");
    os.precision(17);
    for (double v : f.v) os << v << "\r\n";
  } else {
    std::ofstream os(basename + ".bin", std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + basename + ".bin'");
    os.write(reinterpret_cast<const char*>(f.v.data()),
             static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  }
}

GridFunction read_grid_function(const std::string& basename) {
  const ojson header = ojson::parse(read_text_file(basename + ".json"));
  GridFunction f;
  f.grid = build_grid(header.at("n").get<int>(), header.at("L").get<double>(),
                      header.at("N").get<int>());
  f.family = header.value("family", "raw");
  if (header.contains("params"))
    for (const auto& [k, v] : header.at("params").items()) f.params[k] = v.get<double>();
  f.support_warning = header.value("support_warning", false);
  const std::size_t count = static_cast<std::size_t>(f.grid.cells());
  f.v.resize(count);
  const std::string fmt = header.value("format", "bin");
  if (fmt == "csv") {
    std::ifstream is(basename + ".csv");
    if (!is) throw std::runtime_error("cannot open '" + basename + ".csv'");
    for (std::size_t i = 0; i < count; ++i)
      if (!(is >> f.v[i])) throw std::runtime_error("grid csv: too few values");
  } else {
    std::ifstream is(basename + ".bin", std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + basename + ".bin'");
    is.read(reinterpret_cast<char*>(f.v.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
      throw std::runtime_error("grid bin: truncated file");
  }
  f.rescan_support();
  return f;
}

}  // namespace besov
