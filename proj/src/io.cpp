#include "covbell/io.hpp"

#include <boost/version.hpp>
#include <Eigen/Core>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "covbell/errors.hpp"

namespace covbell::io {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) { return std::strtod(format_double(v).c_str(), nullptr); }

std::string format_rational_approx(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", to_double(r));
  return to_string_ratio(r) + " ≈ " + buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

std::string rational_set_cell(const std::vector<Rational>& values) {
  if (values.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    out += to_string_ratio(values[i]);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw input_error("write failed: " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string version_string() { return "covbell 1.0.0"; }

nlohmann::json versions_json() {
  nlohmann::json j;
  j["covbell"] = "1.0.0";
  j["compiler"] = __VERSION__;
  j["boost"] = BOOST_LIB_VERSION;
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
               std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  j["nlohmann_json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                       std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  return j;
}

void write_manifest(const std::string& path, const nlohmann::json& config,
                    double seconds, const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["tool"] = version_string();
  j["versions"] = versions_json();
  j["config"] = config;
  j["timings"] = {{"total_seconds", seconds}};
  j["outputs"] = outputs;
  write_json_file(path, j);
}

}  // namespace covbell::io
