#pragma once

// File formats: Matrix JSON {"n", "re", "im"}, Measure JSON
// {"n", "N", "atoms": [{"lambda", "weight": {"re", "im"}}]}, convergence
// report CSV/JSON, trace-measure CSV, and the t-grid flag syntax.
// Every real number is written with 17 significant digits.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lapmeas/experiments.hpp"
#include "lapmeas/matrix.hpp"
#include "lapmeas/measure.hpp"

namespace lapmeas::io {

using Json = nlohmann::ordered_json;

// "%.17g"; non-finite values become "nan"/"inf"/"-inf".
std::string format_double(double x);

// Serializes with 17 significant digits for floats (NaN/Inf as null).
std::string dump_json(const Json& j);

Json matrix_to_json(const Matrix& m);
// "im" may be omitted. InputError on malformed input.
Matrix matrix_from_json(const nlohmann::json& j);

Json measure_to_json(const DiscreteMatrixMeasure& m);
DiscreteMatrixMeasure measure_from_json(const nlohmann::json& j);

Json report_to_json(const ConvergenceReport& report);
// Header: N,max_transform_err,total_variation,hermitian_dev,moment0_err,moment1_err,moment2_err
std::string report_to_csv(const ConvergenceReport& report);

// Header: lambda,weight_re,weight_im
std::string trace_measure_to_csv(const TraceMeasure& mu);

// "a:b:s" gives a, a+s, ... <= b; an optional "+ci" / "-ci" suffix on the
// step adds the imaginary offset c to every sample. A single number or
// "x+yi" denotes one point. InputError on malformed specs or empty grids.
std::vector<Complex> parse_t_grid(const std::string& spec);
std::vector<Complex> parse_t_grids(const std::vector<std::string>& specs);

// "4,8,16" -> {4, 8, 16}
std::vector<int> parse_schedule(const std::string& spec);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);
nlohmann::json read_json_file(const std::filesystem::path& path);

Matrix read_matrix(const std::filesystem::path& path);
DiscreteMatrixMeasure read_measure(const std::filesystem::path& path);

}  // namespace lapmeas::io
