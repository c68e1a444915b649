#include "isospec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "isospec/error.hpp"

namespace isospec::io {

std::string format_number(double value) {
  if (!std::isfinite(value))
    fail(ErrorCode::invalid_argument, "cannot serialise a non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string s = buf;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace {

bool is_scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

void dump_to(const Json& v, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (v.type()) {
    case Json::value_t::number_float:
      out += format_number(v.get<double>());
      return;
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        dump_to(item, indent + 2, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      const bool flat = std::all_of(v.begin(), v.end(), is_scalar);
      if (v.empty() || flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump_to(v[i], indent, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_to(v[i], indent + 2, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    default:
      out += v.dump();
  }
}

const Json& member(const Json& j, const char* key, const char* what) {
  if (!j.is_object())
    fail(ErrorCode::parse, std::string(what) + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end())
    fail(ErrorCode::parse,
         std::string(what) + " is missing key \"" + key + "\"");
  return *it;
}

double number(const Json& v, const char* key) {
  if (!v.is_number())
    fail(ErrorCode::parse, std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

int integer(const Json& v, const char* key) {
  if (!v.is_number_integer())
    fail(ErrorCode::parse, std::string("\"") + key + "\" must be an integer");
  const auto i = v.get<long long>();
  if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
    fail(ErrorCode::parse, std::string("\"") + key + "\" is out of range");
  return static_cast<int>(i);
}

std::vector<double> numbers(const Json& v, const char* key) {
  if (!v.is_array())
    fail(ErrorCode::parse, std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(number(x, key));
  return out;
}

Json one_based(const std::vector<int>& support) {
  Json a = Json::array();
  for (int j : support) a.push_back(j + 1);
  return a;
}

}  // namespace

std::string dump(const Json& value) {
  std::string out;
  dump_to(value, 0, out);
  out += "\n";
  return out;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorCode::io, "error reading " + path);
  return buf.str();
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, origin + ": " + e.what());
  }
}

Json read_json(const std::string& path) {
  return parse_json(read_text(path), path);
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::io, "error writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::io, "cannot move output into place: " + path);
  }
}

void write_json(const std::string& path, const Json& value) {
  write_text_atomic(path, dump(value));
}

Json to_json(const GridPotential& pot) {
  Json j;
  j["L"] = pot.length();
  j["n"] = pot.intervals();
  j["samples"] = std::vector<double>(pot.samples().begin(), pot.samples().end());
  j["label"] = pot.label();
  return j;
}

GridPotential potential_from_json(const Json& j) {
  const char* what = "potential";
  const double length = number(member(j, "L", what), "L");
  const int n = integer(member(j, "n", what), "n");
  std::vector<double> samples = numbers(member(j, "samples", what), "samples");
  std::string label;
  if (auto it = j.find("label"); it != j.end()) {
    if (!it->is_string()) fail(ErrorCode::parse, "\"label\" must be a string");
    label = it->get<std::string>();
  }
  return GridPotential(length, n, std::move(samples), std::move(label));
}

Json to_json(const SpectralMeasure& m) {
  const Provenance& p = m.provenance();
  Json prov;
  prov["source"] = p.source;
  prov["L"] = p.length;
  prov["n"] = p.intervals;
  prov["J"] = p.count;
  prov["tolerances"] = {{"eigen", p.eigen_tol}, {"quadrature", p.quad_tol}};
  prov["support"] = one_based(p.support);
  prov["tail_ratio"] = p.tail_ratio;

  Json j;
  j["eigenvalues"] = m.eigenvalues();
  j["weights"] = m.weights();
  j["provenance"] = prov;
  return j;
}

SpectralMeasure measure_from_json(const Json& j) {
  const char* what = "measure";
  std::vector<double> e = numbers(member(j, "eigenvalues", what), "eigenvalues");
  std::vector<double> w = numbers(member(j, "weights", what), "weights");
  Provenance p;
  if (auto it = j.find("provenance"); it != j.end()) {
    const Json& q = *it;
    const char* pw = "provenance";
    if (!q.is_object()) fail(ErrorCode::parse, "provenance must be an object");
    if (q.contains("source")) {
      if (!q["source"].is_string())
        fail(ErrorCode::parse, "\"source\" must be a string");
      p.source = q["source"].get<std::string>();
    }
    if (q.contains("L")) p.length = number(q["L"], "L");
    if (q.contains("n")) p.intervals = integer(q["n"], "n");
    if (q.contains("J")) p.count = integer(q["J"], "J");
    if (q.contains("tolerances")) {
      const Json& t = q["tolerances"];
      p.eigen_tol = number(member(t, "eigen", pw), "eigen");
      p.quad_tol = number(member(t, "quadrature", pw), "quadrature");
    }
    if (q.contains("support")) {
      if (!q["support"].is_array())
        fail(ErrorCode::parse, "\"support\" must be an array");
      for (const auto& s : q["support"]) {
        const int idx = integer(s, "support");
        if (idx < 1) fail(ErrorCode::parse, "support indices start at 1");
        p.support.push_back(idx - 1);
      }
    }
    if (q.contains("tail_ratio")) p.tail_ratio = number(q["tail_ratio"], "tail_ratio");
  }
  return SpectralMeasure(std::move(e), std::move(w), std::move(p));
}

Json to_json(const IsospectralPath& path) {
  Json j;
  j["base"] = to_json(path.base());
  j["target"] = to_json(path.target());
  j["tol"] = path.tolerance();
  return j;
}

IsospectralPath path_from_json(const Json& j) {
  const char* what = "path";
  SpectralMeasure base = measure_from_json(member(j, "base", what));
  SpectralMeasure target = measure_from_json(member(j, "target", what));
  const double tol = number(member(j, "tol", what), "tol");
  return make_path(base, target, tol);
}

Json to_json(const EigenSolveReport& report) {
  Json j;
  j["eigenvalues"] = report.eigenvalues;
  j["residuals"] = report.residuals;
  j["iterations"] = report.iterations;
  j["match_point"] = report.match_point;
  return j;
}

Json to_json(const IsospectralityReport& report) {
  Json tol;
  tol["eigen"] = report.tolerances.eigen;
  tol["weight"] = report.tolerances.weight;
  tol["radius_fraction"] = report.tolerances.radius_fraction;
  tol["margin"] = report.tolerances.margin;
  tol["phase"] = report.tolerances.solver.phase_tol;
  tol["ode"] = report.tolerances.solver.ode_tol;

  Json records = Json::array();
  for (const auto& r : report.records) {
    Json rec;
    rec["t"] = r.t;
    rec["eig_dev"] = r.eig_dev;
    rec["weight_dev"] = r.weight_dev;
    rec["det_positive"] = r.det_positive;
    rec["pass"] = r.pass;
    records.push_back(rec);
  }
  Json j;
  j["tolerances"] = tol;
  j["compared"] = report.compared;
  j["radius"] = report.radius;
  j["records"] = records;
  j["l1_increments"] = report.l1_increments;
  j["pass"] = report.pass;
  return j;
}

Json sidecar_json(const ReconstructionResult& result,
                  const ReconstructionOptions& opts) {
  Json j;
  j["t"] = result.t;
  j["support"] = one_based(result.support);
  j["L"] = result.potential.length();
  j["n"] = result.potential.intervals();
  j["min_det"] = result.min_det;
  j["max_condition"] = result.max_condition;
  j["base_weight_mismatch"] = result.base_weight_mismatch;
  j["warnings"] = result.warnings;
  j["tolerances"] = {{"ode", opts.ode_tol},
                     {"condition_warn", opts.condition_warn}};
  return j;
}

std::string a_function_csv(const AFunction& a) {
  std::string out = "alpha,A,residual\n";
  for (int i = 0; i < a.grid.count; ++i) {
    out += format_number(a.grid.at(i));
    out += ',';
    out += format_number(a.values[i]);
    out += ',';
    out += format_number(a.residuals[i]);
    out += '\n';
  }
  return out;
}

std::string reconstruction_csv(const ReconstructionResult& result) {
  const GridPotential& pot = result.potential;
  std::string out = "x,V_t,detIplusDP\n";
  for (int i = 0; i <= pot.intervals(); ++i) {
    out += format_number(pot.node(i));
    out += ',';
    out += format_number(pot.samples()[i]);
    out += ',';
    out += format_number(result.det_track[i]);
    out += '\n';
  }
  return out;
}

}  // namespace isospec::io
