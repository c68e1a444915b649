#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "isospec/isospec.h"

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

enum Exit {
  exit_pass = 0,
  exit_verify_failed = 1,
  exit_config = 2,
  exit_path_data = 3,
  exit_compute = 4
};

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void config_error(const std::string& msg) {
  throw Failure{exit_config, msg};
}

int exit_for(isospec_status s) {
  switch (s) {
    case ISOSPEC_INVALID_ARGUMENT:
    case ISOSPEC_IO:
    case ISOSPEC_PARSE:
    case ISOSPEC_GRID_MISMATCH:
      return exit_config;
    case ISOSPEC_SPECTRUM_MISMATCH:
    case ISOSPEC_LENGTH_MISMATCH:
    case ISOSPEC_NONPOSITIVE_WEIGHT:
    case ISOSPEC_PROVENANCE_MISMATCH:
      return exit_path_data;
    default:
      return exit_compute;
  }
}

void check(isospec_status s) {
  if (s != ISOSPEC_OK)
    throw Failure{exit_for(s), std::string(isospec_status_name(s)) + ": " +
                                   isospec_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Potential =
    std::unique_ptr<isospec_potential, Deleter<isospec_potential, isospec_potential_free>>;
using Measure =
    std::unique_ptr<isospec_measure, Deleter<isospec_measure, isospec_measure_free>>;
using Path = std::unique_ptr<isospec_path, Deleter<isospec_path, isospec_path_free>>;
using AFunc = std::unique_ptr<isospec_afunc, Deleter<isospec_afunc, isospec_afunc_free>>;
using Recon = std::unique_ptr<isospec_reconstruction,
                              Deleter<isospec_reconstruction, isospec_reconstruction_free>>;
using Report = std::unique_ptr<isospec_report, Deleter<isospec_report, isospec_report_free>>;

struct Perturbation {
  int j = 0;  // 1-based
  std::optional<double> delta;
  std::optional<double> relative;
};

struct Config {
  fs::path base_dir;
  std::string builtin;
  std::string potential_file;
  std::optional<double> length;
  std::optional<int> intervals;
  int count = 10;
  std::optional<bool> truncation_check;
  std::vector<Perturbation> perturbation;
  std::vector<double> ts = {0.0, 0.25, 0.5, 0.75, 1.0};
  double alpha_min = 0.0;
  double alpha_max = 1.0;
  int alpha_n = 101;
  bool regularized = false;
  std::string out = "out";
  double eigen_tol = 1e-10;
  double quad_tol = 1e-11;
  double verify_tol = 1e-5;
  double weight_tol = 1e-4;
  double path_tol = 1e-10;
  std::string measure_file;
  std::string path_file;
  std::string target_file;
  bool oracle = false;
};

double get_number(const Json& j, const char* key) {
  if (!j.is_number()) config_error(std::string("\"") + key + "\" must be a number");
  return j.get<double>();
}

int get_int(const Json& j, const char* key) {
  if (!j.is_number_integer())
    config_error(std::string("\"") + key + "\" must be an integer");
  return j.get<int>();
}

bool get_bool(const Json& j, const char* key) {
  if (!j.is_boolean()) config_error(std::string("\"") + key + "\" must be true or false");
  return j.get<bool>();
}

std::string get_string(const Json& j, const char* key) {
  if (!j.is_string()) config_error(std::string("\"") + key + "\" must be a string");
  return j.get<std::string>();
}

std::vector<double> parse_t_list(const std::string& text) {
  std::vector<double> ts;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      config_error("bad t value '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      config_error("bad t value '" + item + "'");
    ts.push_back(v);
  }
  if (ts.empty()) config_error("empty t list");
  return ts;
}

Config load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) config_error("cannot open config " + file);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    config_error(file + ": " + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");

  static const std::vector<std::string> known = {
      "potential", "J", "truncation_check", "perturbation", "t", "alpha",
      "regularized", "out", "tolerances", "measure", "path", "target", "oracle"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      config_error("unknown config key \"" + key + "\"");

  Config c;
  c.base_dir = fs::path(file).parent_path();
  if (j.contains("potential")) {
    const Json& p = j["potential"];
    if (!p.is_object()) config_error("\"potential\" must be an object");
    if (p.contains("builtin")) c.builtin = get_string(p["builtin"], "builtin");
    if (p.contains("file")) c.potential_file = get_string(p["file"], "file");
    if (p.contains("L")) c.length = get_number(p["L"], "L");
    if (p.contains("n")) c.intervals = get_int(p["n"], "n");
    if (c.builtin.empty() == c.potential_file.empty())
      config_error("potential needs exactly one of \"builtin\" or \"file\"");
  }
  if (j.contains("J")) c.count = get_int(j["J"], "J");
  if (j.contains("truncation_check"))
    c.truncation_check = get_bool(j["truncation_check"], "truncation_check");
  if (j.contains("perturbation")) {
    const Json& list = j["perturbation"];
    if (!list.is_array()) config_error("\"perturbation\" must be an array");
    for (const Json& e : list) {
      if (!e.is_object() || !e.contains("j"))
        config_error("each perturbation needs \"j\"");
      Perturbation p;
      p.j = get_int(e["j"], "j");
      if (e.contains("delta")) p.delta = get_number(e["delta"], "delta");
      if (e.contains("relative")) p.relative = get_number(e["relative"], "relative");
      if (p.delta.has_value() == p.relative.has_value())
        config_error("each perturbation needs exactly one of \"delta\" or \"relative\"");
      c.perturbation.push_back(p);
    }
  }
  if (j.contains("t")) {
    if (!j["t"].is_array() || j["t"].empty())
      config_error("\"t\" must be a non-empty array");
    c.ts.clear();
    for (const Json& t : j["t"]) c.ts.push_back(get_number(t, "t"));
  }
  if (j.contains("alpha")) {
    const Json& a = j["alpha"];
    if (!a.is_object()) config_error("\"alpha\" must be an object");
    if (a.contains("min")) c.alpha_min = get_number(a["min"], "min");
    if (a.contains("max")) c.alpha_max = get_number(a["max"], "max");
    if (a.contains("n")) c.alpha_n = get_int(a["n"], "n");
  }
  if (j.contains("regularized")) c.regularized = get_bool(j["regularized"], "regularized");
  if (j.contains("out")) c.out = get_string(j["out"], "out");
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) config_error("\"tolerances\" must be an object");
    for (const auto& [key, value] : t.items()) {
      const double v = get_number(value, key.c_str());
      if (!(v > 0.0)) config_error("tolerance \"" + key + "\" must be positive");
      if (key == "eigen") c.eigen_tol = v;
      else if (key == "quadrature") c.quad_tol = v;
      else if (key == "verify") c.verify_tol = v;
      else if (key == "weight") c.weight_tol = v;
      else if (key == "path") c.path_tol = v;
      else config_error("unknown tolerance \"" + key + "\"");
    }
  }
  if (j.contains("measure")) c.measure_file = get_string(j["measure"], "measure");
  if (j.contains("path")) c.path_file = get_string(j["path"], "path");
  if (j.contains("target")) c.target_file = get_string(j["target"], "target");
  if (j.contains("oracle")) c.oracle = get_bool(j["oracle"], "oracle");
  return c;
}

std::string resolve(const Config& c, const std::string& file) {
  const fs::path p(file);
  const std::string full = p.is_absolute() ? file : (c.base_dir / p).string();
  if (!fs::exists(full)) config_error("file not found: " + full);
  return full;
}

void validate(const Config& c) {
  if (c.count < 1) config_error("J must be at least 1");
  if (c.alpha_n < 1) config_error("alpha n must be at least 1");
  if (!(c.alpha_max > c.alpha_min) && c.alpha_n > 1)
    config_error("alpha max must exceed alpha min");
  if (c.alpha_min < 0.0) config_error("alpha min must be non-negative");
  for (const Perturbation& p : c.perturbation)
    if (p.j < 1 || p.j > c.count)
      config_error("perturbation index " + std::to_string(p.j) + " outside 1..J");
}

Potential load_potential(const Config& c) {
  isospec_potential* raw = nullptr;
  if (!c.potential_file.empty()) {
    check(isospec_potential_read(resolve(c, c.potential_file).c_str(), &raw));
    return Potential(raw);
  }
  if (c.builtin.empty()) config_error("config has no potential");
  double length = 0.0;
  int n = 0;
  if (c.builtin == "zero") {
    length = std::numbers::pi;
    n = 4000;
  } else if (c.builtin == "linear") {
    length = 40.0;
    n = 8000;
  } else if (c.builtin == "quadratic") {
    length = 14.0;
    n = 5600;
  } else {
    config_error("unknown builtin potential \"" + c.builtin + "\"");
  }
  check(isospec_potential_builtin(c.builtin.c_str(), c.length.value_or(length),
                                  c.intervals.value_or(n), &raw));
  return Potential(raw);
}

isospec_forward_options forward_options(const Config& c) {
  isospec_forward_options o;
  isospec_forward_options_default(&o);
  o.phase_tol = c.eigen_tol;
  o.ode_tol = c.quad_tol;
  // A box (V = 0) has no decaying eigenfunctions, so the check is off there.
  o.check_truncation = c.truncation_check.value_or(c.builtin != "zero") ? 1 : 0;
  return o;
}

Measure base_measure(const Config& c, const isospec_potential* pot) {
  isospec_measure* raw = nullptr;
  if (!c.measure_file.empty()) {
    check(isospec_measure_read(resolve(c, c.measure_file).c_str(), &raw));
    return Measure(raw);
  }
  if (!pot) config_error("config needs a potential or a measure file");
  const isospec_forward_options o = forward_options(c);
  check(isospec_spectral_measure(pot, c.count, &o, &raw));
  return Measure(raw);
}

Path build_path(const Config& c, const isospec_potential* pot) {
  isospec_path* raw = nullptr;
  if (!c.path_file.empty()) {
    check(isospec_path_read(resolve(c, c.path_file).c_str(), &raw));
    return Path(raw);
  }
  Measure base = base_measure(c, pot);
  Measure target;
  isospec_measure* t = nullptr;
  if (!c.target_file.empty()) {
    check(isospec_measure_read(resolve(c, c.target_file).c_str(), &t));
  } else {
    const std::size_t size = isospec_measure_size(base.get());
    const double* w = isospec_measure_weights(base.get());
    std::vector<int> idx;
    std::vector<double> delta;
    for (const Perturbation& p : c.perturbation) {
      if (static_cast<std::size_t>(p.j) > size)
        config_error("perturbation index " + std::to_string(p.j) +
                     " exceeds the measure size");
      idx.push_back(p.j - 1);
      delta.push_back(p.delta ? *p.delta : *p.relative * w[p.j - 1]);
    }
    check(isospec_measure_perturb(base.get(), idx.size(), idx.data(),
                                  delta.data(), &t));
  }
  target.reset(t);
  check(isospec_path_create(base.get(), target.get(), c.path_tol, &raw));
  return Path(raw);
}

std::string t_tag(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", t);
  return std::string("t") + buf;
}

fs::path prepare_out(const Config& c) {
  const fs::path out(c.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out))
    config_error("cannot create output directory " + c.out);
  return out;
}

int cmd_forward(const Config& c) {
  Potential pot = load_potential(c);
  const fs::path out = prepare_out(c);
  Measure m = base_measure(c, pot.get());
  check(isospec_potential_write(pot.get(), (out / "potential.json").c_str()));
  check(isospec_measure_write(m.get(), (out / "measure.json").c_str()));
  check(isospec_measure_write_eigen_report(m.get(),
                                           (out / "eigen_report.json").c_str()));
  return exit_pass;
}

Potential optional_potential(const Config& c) {
  if (c.builtin.empty() && c.potential_file.empty()) return Potential();
  return load_potential(c);
}

int cmd_path(const Config& c) {
  Potential pot = optional_potential(c);
  const fs::path out = prepare_out(c);
  Path path = build_path(c, pot.get());
  check(isospec_path_write(path.get(), (out / "path.json").c_str()));
  return exit_pass;
}

int cmd_afunc(const Config& c) {
  Potential pot = optional_potential(c);
  const fs::path out = prepare_out(c);
  Path path = build_path(c, pot.get());
  isospec_measure *b = nullptr, *t = nullptr;
  check(isospec_path_base(path.get(), &b));
  Measure base(b);
  check(isospec_path_target(path.get(), &t));
  Measure target(t);

  isospec_afunc *raw0 = nullptr, *raw1 = nullptr;
  check(isospec_delta_a(base.get(), base.get(), c.alpha_min, c.alpha_max,
                        c.alpha_n, &raw0));
  AFunc a0(raw0);
  check(isospec_delta_a(target.get(), base.get(), c.alpha_min, c.alpha_max,
                        c.alpha_n, &raw1));
  AFunc a1(raw1);
  for (double tv : c.ts) {
    isospec_afunc* at = nullptr;
    check(isospec_afunc_interpolate(a0.get(), a1.get(), tv, &at));
    AFunc a(at);
    const fs::path file = out / ("afunc_" + t_tag(tv) + ".csv");
    check(isospec_afunc_write_csv(a.get(), file.c_str()));

    if (c.regularized) {
      // The regularised transform is not defined at alpha = 0.
      double first = c.alpha_min;
      int count = c.alpha_n;
      if (first <= 0.0) {
        if (count < 2) config_error("regularized A needs alpha > 0");
        first = c.alpha_min + (c.alpha_max - c.alpha_min) / (count - 1);
        count -= 1;
      }
      isospec_measure* mt = nullptr;
      check(isospec_path_measure_at(path.get(), tv, &mt));
      Measure measure(mt);
      isospec_afunc* reg = nullptr;
      check(isospec_a_regularized(measure.get(), first, c.alpha_max, count, &reg));
      AFunc r(reg);
      const fs::path rfile = out / ("afunc_regularized_" + t_tag(tv) + ".csv");
      check(isospec_afunc_write_csv(r.get(), rfile.c_str()));
    }
  }
  return exit_pass;
}

void write_oracle_csv(const fs::path& file, const isospec_potential* v) {
  const int n = isospec_potential_intervals(v);
  const double length = isospec_potential_length(v);
  const double* s = isospec_potential_samples(v);
  std::string text = "x,V\n";
  char buf[96];
  for (int i = 0; i <= n; ++i) {
    const double x = i == n ? length : i * (length / n);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, s[i]);
    text += buf;
  }
  const fs::path tmp = fs::path(file) += ".tmp";
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) config_error("cannot write " + tmp.string());
    o << text;
    if (!o) config_error("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) config_error("cannot write " + file.string());
}

int cmd_reconstruct(const Config& c) {
  Potential pot = load_potential(c);
  const fs::path out = prepare_out(c);
  Path path = build_path(c, pot.get());
  isospec_reconstruct_options opts;
  isospec_reconstruct_options_default(&opts);
  opts.ode_tol = c.quad_tol;

  for (double tv : c.ts) {
    isospec_reconstruction* raw = nullptr;
    check(isospec_reconstruct_at(path.get(), pot.get(), tv, &opts, &raw));
    Recon r(raw);
    const std::string tag = t_tag(tv);
    check(isospec_reconstruction_write_csv(
        r.get(), (out / ("reconstruct_" + tag + ".csv")).c_str()));
    check(isospec_reconstruction_write_sidecar(
        r.get(), (out / ("reconstruct_" + tag + ".json")).c_str()));
    check(isospec_potential_write(isospec_reconstruction_potential(r.get()),
                                  (out / ("potential_" + tag + ".json")).c_str()));
    for (std::size_t i = 0; i < isospec_reconstruction_warning_count(r.get()); ++i)
      std::fprintf(stderr, "warning (t = %g): %s\n", tv,
                   isospec_reconstruction_warning(r.get(), i));

    if (c.oracle) {
      int j = 0;
      if (isospec_path_support(path.get(), &j, 1) != 1)
        config_error("the rank-one oracle needs a path with exactly one perturbed weight");
      isospec_measure *b = nullptr, *m = nullptr;
      check(isospec_path_base(path.get(), &b));
      Measure base(b);
      check(isospec_path_measure_at(path.get(), tv, &m));
      Measure mt(m);
      const double delta = isospec_measure_weights(mt.get())[j] -
                           isospec_measure_weights(base.get())[j];
      isospec_potential* o = nullptr;
      check(isospec_rank_one_oracle(pot.get(), isospec_measure_eigenvalues(base.get())[j],
                                    delta, &o));
      Potential oracle(o);
      write_oracle_csv(out / ("oracle_" + tag + ".csv"), oracle.get());
    }
  }
  return exit_pass;
}

int cmd_verify(const Config& c) {
  Potential pot = load_potential(c);
  const fs::path out = prepare_out(c);
  const bool spectrum_only = c.path_file.empty() && c.perturbation.empty() &&
                             c.target_file.empty() && !c.measure_file.empty();
  if (spectrum_only) {
    // Compare the potential's spectrum with a stored measure.
    Measure m = base_measure(c, nullptr);
    const std::size_t size = isospec_measure_size(m.get());
    const int count = static_cast<int>(std::min<std::size_t>(size, c.count));
    isospec_verify_tolerances tol;
    isospec_verify_tolerances_default(&tol);
    tol.eigen = c.verify_tol;
    tol.phase_tol = c.eigen_tol;
    tol.ode_tol = c.quad_tol;
    isospec_report* raw = nullptr;
    check(isospec_spectrum_report(pot.get(), isospec_measure_eigenvalues(m.get()),
                                  size, count, &tol, &raw));
    Report report(raw);
    check(isospec_report_write(report.get(), (out / "report.json").c_str()));
    return isospec_report_pass(report.get()) ? exit_pass : exit_verify_failed;
  }

  Path path = build_path(c, pot.get());
  isospec_verify_tolerances tol;
  isospec_verify_tolerances_default(&tol);
  tol.eigen = c.verify_tol;
  tol.weight = c.weight_tol;
  tol.phase_tol = c.eigen_tol;
  tol.ode_tol = c.quad_tol;
  isospec_report* raw = nullptr;
  check(isospec_path_report(path.get(), pot.get(), c.ts.data(), c.ts.size(), &tol,
                            &raw));
  Report report(raw);
  check(isospec_report_write(report.get(), (out / "report.json").c_str()));
  return isospec_report_pass(report.get()) ? exit_pass : exit_verify_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isospectral paths for half-line Dirichlet Schroedinger operators"};
  app.require_subcommand(1);

  std::string config_file, out_dir, t_list;
  std::optional<double> alpha_max;
  std::optional<int> alpha_n;
  bool regularized = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"forward", "Eigenvalues and norming constants of a potential"},
      {"path", "Isospectral path from weight perturbations"},
      {"afunc", "A-function along the path"},
      {"reconstruct", "Potentials along the path by Gelfand-Levitan inversion"},
      {"verify", "Isospectrality report for the path"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_file, "JSON job configuration")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--t", t_list, "Comma-separated t samples");
    sub->add_option("--alpha-max", alpha_max, "Largest alpha of the grid");
    sub->add_option("--alpha-n", alpha_n, "Number of alpha grid points");
    sub->add_flag("--regularized", regularized, "Also write the regularised A");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_config;
  }

  try {
    Config c = load_config(config_file);
    if (!out_dir.empty())
      c.out = out_dir;
    else if (fs::path(c.out).is_relative())
      c.out = (c.base_dir / c.out).string();
    if (!t_list.empty()) c.ts = parse_t_list(t_list);
    if (alpha_max) c.alpha_max = *alpha_max;
    if (alpha_n) c.alpha_n = *alpha_n;
    if (regularized) c.regularized = true;
    validate(c);

    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "forward") return cmd_forward(c);
    if (name == "path") return cmd_path(c);
    if (name == "afunc") return cmd_afunc(c);
    if (name == "reconstruct") return cmd_reconstruct(c);
    return cmd_verify(c);
  } catch (const Failure& f) {
    std::fprintf(stderr, "isospec: %s\n", f.message.c_str());
    return f.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "isospec: %s\n", e.what());
    return exit_compute;
  }
}
