#include "lapmeas/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lapmeas/error.hpp"

namespace lapmeas::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

bool is_flat_numeric_array(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& e : j)
    if (!e.is_number() && !e.is_null()) return false;
  return true;
}

void write_json(const Json& j, std::ostringstream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case Json::value_t::null:
      out << "null";
      break;
    case Json::value_t::boolean:
      out << (j.get<bool>() ? "true" : "false");
      break;
    case Json::value_t::number_integer:
      out << j.get<std::int64_t>();
      break;
    case Json::value_t::number_unsigned:
      out << j.get<std::uint64_t>();
      break;
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out << (std::isfinite(x) ? format_double(x) : "null");
      break;
    }
    case Json::value_t::string:
      out << j.dump();
      break;
    case Json::value_t::array:
      if (j.empty()) {
        out << "[]";
      } else if (is_flat_numeric_array(j)) {
        out << '[';
        bool first = true;
        for (const auto& e : j) {
          if (!first) out << ", ";
          first = false;
          write_json(e, out, indent + 1);
        }
        out << ']';
      } else {
        out << "[\n";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out << ",\n";
          first = false;
          out << inner;
          write_json(e, out, indent + 1);
        }
        out << '\n' << pad << ']';
      }
      break;
    case Json::value_t::object:
      if (j.empty()) {
        out << "{}";
      } else {
        out << "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
          if (!first) out << ",\n";
          first = false;
          out << inner << Json(key).dump() << ": ";
          write_json(value, out, indent + 1);
        }
        out << '\n' << pad << '}';
      }
      break;
    default:
      throw InputError("dump_json: unsupported JSON value");
  }
}

Json rows_of(const Matrix& m, bool imaginary) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(imaginary ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> read_grid(const nlohmann::json& grid, std::size_t n, const char* name) {
  if (!grid.is_array() || grid.size() != n) {
    throw InputError(std::string("matrix JSON: \"") + name + "\" must have " + std::to_string(n) + " rows");
  }
  std::vector<double> out;
  out.reserve(n * n);
  for (const auto& row : grid) {
    if (!row.is_array() || row.size() != n) {
      throw InputError(std::string("matrix JSON: every row of \"") + name + "\" must have " +
                       std::to_string(n) + " entries");
    }
    for (const auto& x : row) {
      if (!x.is_number()) throw InputError(std::string("matrix JSON: non-numeric entry in \"") + name + "\"");
      out.push_back(x.get<double>());
    }
  }
  return out;
}

Matrix weight_from_json(const nlohmann::json& j, std::size_t n) {
  if (!j.is_object() || !j.contains("re")) throw InputError("matrix JSON: missing \"re\"");
  const auto re = read_grid(j.at("re"), n, "re");
  std::vector<double> im(n * n, 0.0);
  if (j.contains("im") && !j.at("im").is_null()) im = read_grid(j.at("im"), n, "im");
  std::vector<Complex> entries(n * n);
  for (std::size_t k = 0; k < n * n; ++k) entries[k] = {re[k], im[k]};
  return Matrix(n, std::move(entries));
}

std::size_t read_dim(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.at("n").is_number_integer()) {
    throw InputError("JSON: missing integer \"n\"");
  }
  const auto n = j.at("n").get<std::int64_t>();
  if (n < 1) throw InputError("JSON: \"n\" must be >= 1");
  return static_cast<std::size_t>(n);
}

}  // namespace

std::string dump_json(const Json& j) {
  std::ostringstream out;
  write_json(j, out, 0);
  out << '\n';
  return out.str();
}

Json matrix_to_json(const Matrix& m) {
  Json j = Json::object();
  j["n"] = m.dim();
  j["re"] = rows_of(m, false);
  j["im"] = rows_of(m, true);
  return j;
}

Matrix matrix_from_json(const nlohmann::json& j) { return weight_from_json(j, read_dim(j)); }

Json measure_to_json(const DiscreteMatrixMeasure& m) {
  Json j = Json::object();
  j["n"] = m.dim();
  j["N"] = m.meta().N ? Json(*m.meta().N) : Json(nullptr);
  Json atoms = Json::array();
  for (const auto& atom : m.atoms()) {
    Json weight = Json::object();
    weight["re"] = rows_of(atom.weight, false);
    weight["im"] = rows_of(atom.weight, true);
    Json a = Json::object();
    a["lambda"] = atom.location;
    a["weight"] = std::move(weight);
    atoms.push_back(std::move(a));
  }
  j["atoms"] = std::move(atoms);
  return j;
}

DiscreteMatrixMeasure measure_from_json(const nlohmann::json& j) {
  const std::size_t n = read_dim(j);
  MeasureMeta meta;
  if (j.contains("N") && !j.at("N").is_null()) {
    if (!j.at("N").is_number_integer() || j.at("N").get<std::int64_t>() < 1) {
      throw InputError("measure JSON: \"N\" must be a positive integer or null");
    }
    meta.N = static_cast<int>(j.at("N").get<std::int64_t>());
  }
  if (!j.contains("atoms") || !j.at("atoms").is_array()) throw InputError("measure JSON: missing \"atoms\" array");
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    if (!a.is_object() || !a.contains("lambda") || !a.at("lambda").is_number() || !a.contains("weight")) {
      throw InputError("measure JSON: every atom needs numeric \"lambda\" and \"weight\"");
    }
    atoms.push_back({a.at("lambda").get<double>(), weight_from_json(a.at("weight"), n)});
  }
  meta.source = "file";
  return DiscreteMatrixMeasure(n, std::move(atoms), std::move(meta));
}

Json report_to_json(const ConvergenceReport& report) {
  Json j = Json::object();
  j["n_schedule"] = report.n_schedule;
  Json per_n = Json::array();
  for (const auto& rec : report.per_N) {
    Json r = Json::object();
    r["N"] = rec.N;
    r["max_transform_err"] = rec.max_transform_err;
    r["total_variation"] = rec.total_variation;
    r["hermitian_dev"] = rec.hermitian_dev;
    r["moment0_err"] = rec.moment_err[0];
    r["moment1_err"] = rec.moment_err[1];
    r["moment2_err"] = rec.moment_err[2];
    r["cauchy_distance"] = rec.cauchy_distance ? Json(*rec.cauchy_distance) : Json(nullptr);
    per_n.push_back(std::move(r));
  }
  j["per_N"] = std::move(per_n);
  j["rate_estimate"] = report.rate_estimate;
  j["truth_crosscheck"] = report.truth_crosscheck;
  return j;
}

std::string report_to_csv(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "N,max_transform_err,total_variation,hermitian_dev,moment0_err,moment1_err,moment2_err\n";
  for (const auto& rec : report.per_N) {
    out << rec.N << ',' << format_double(rec.max_transform_err) << ','
        << format_double(rec.total_variation) << ',' << format_double(rec.hermitian_dev) << ','
        << format_double(rec.moment_err[0]) << ',' << format_double(rec.moment_err[1]) << ','
        << format_double(rec.moment_err[2]) << '\n';
  }
  return out.str();
}

std::string trace_measure_to_csv(const TraceMeasure& mu) {
  std::ostringstream out;
  out << "lambda,weight_re,weight_im\n";
  for (const auto& a : mu.atoms()) {
    out << format_double(a.location) << ',' << format_double(a.weight.real()) << ','
        << format_double(a.weight.imag()) << '\n';
  }
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, const std::string& context) {
  const std::string s = trim(text);
  if (s.empty()) throw InputError("t grid: empty number in \"" + context + "\"");
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("t grid: cannot parse \"" + s + "\" in \"" + context + "\"");
  }
  if (used != s.size() || !std::isfinite(x)) {
    throw InputError("t grid: cannot parse \"" + s + "\" in \"" + context + "\"");
  }
  return x;
}

// Splits "x+yi" / "x-yi" / "yi" / "x" into (x, y).
std::pair<double, double> parse_complex_parts(const std::string& text, const std::string& context) {
  const std::string s = trim(text);
  if (s.empty() || s.back() != 'i') return {parse_real(s, context), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [&](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_real(part, context);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {parse_real(body.substr(0, split), context), imag_of(body.substr(split))};
}

void parse_one(const std::string& spec, std::vector<Complex>& out) {
  std::vector<std::string> fields;
  std::stringstream ss(spec);
  std::string field;
  while (std::getline(ss, field, ':')) fields.push_back(field);
  if (fields.size() == 1) {
    const auto [re, im] = parse_complex_parts(fields[0], spec);
    out.emplace_back(re, im);
    return;
  }
  if (fields.size() != 3) throw InputError("t grid: expected \"start:stop:step[+ci]\", got \"" + spec + "\"");
  const double start = parse_real(fields[0], spec);
  const double stop = parse_real(fields[1], spec);
  const auto [step, offset] = parse_complex_parts(fields[2], spec);
  if (!(step > 0.0)) throw InputError("t grid: step must be positive in \"" + spec + "\"");
  if (stop < start) throw InputError("t grid: stop < start in \"" + spec + "\"");
  const double count = std::floor((stop - start) / step + 1e-9) + 1.0;
  if (count > 1e6) throw InputError("t grid: too many samples in \"" + spec + "\"");
  for (int k = 0; k < static_cast<int>(count); ++k) out.emplace_back(start + k * step, offset);
}

}  // namespace

std::vector<Complex> parse_t_grid(const std::string& spec) {
  std::vector<Complex> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (trim(part).empty()) continue;
    parse_one(trim(part), out);
  }
  if (out.empty()) throw InputError("t grid: no samples in \"" + spec + "\"");
  return out;
}

std::vector<Complex> parse_t_grids(const std::vector<std::string>& specs) {
  std::vector<Complex> out;
  for (const auto& s : specs) {
    auto part = parse_t_grid(s);
    out.insert(out.end(), part.begin(), part.end());
  }
  if (out.empty()) throw InputError("t grid: no samples");
  return out;
}

std::vector<int> parse_schedule(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const std::string s = trim(part);
    if (s.empty()) continue;
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(s, &used);
    } catch (const std::exception&) {
      throw InputError("schedule: cannot parse \"" + s + "\"");
    }
    if (used != s.size() || value <= 0 || value > 1'000'000) {
      throw InputError("schedule: entries must be positive integers, got \"" + s + "\"");
    }
    out.push_back(static_cast<int>(value));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << contents;
  if (!out) throw InputError("write failed for " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Matrix read_matrix(const std::filesystem::path& path) {
  try {
    return matrix_from_json(read_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

DiscreteMatrixMeasure read_measure(const std::filesystem::path& path) {
  try {
    return measure_from_json(read_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace lapmeas::io
