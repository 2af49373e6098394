#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "covbell/rational.hpp"

namespace covbell::io {

// Floats are serialized at 12 significant digits everywhere.
std::string format_double(double v);
// Round-trip through the 12-digit representation (stabilizes emitted data).
double round12(double v);

// "16/7 ≈ 2.285714" style: exact value first, 6-digit approximation after.
std::string format_rational_approx(const Rational& r);

// CSV helpers: comma-separated cells, one '\n' per row, no quoting (cells are
// numeric or simple tokens by construction).
std::string csv_row(const std::vector<std::string>& cells);

// Cell for a set of exact values: "-" when empty, else ';'-joined "p/q".
std::string rational_set_cell(const std::vector<Rational>& values);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);

// Tool and dependency identification for run manifests.
std::string version_string();
nlohmann::json versions_json();

// Manifest written alongside every result: config echo, versions, timings.
// Results themselves stay byte-identical across runs; wall-clock goes here.
void write_manifest(const std::string& path, const nlohmann::json& config,
                    double seconds, const std::vector<std::string>& outputs);

}  // namespace covbell::io
