#include "cli.hpp"

#include "meanfield/meanfield.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace mfcli {

namespace {

using json = nlohmann::json;

// ---- errors ---------------------------------------------------------------

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
  ApiError(mf_status s, const std::string& what) : std::runtime_error(what), status(s) {}
  mf_status status;
};

void check(mf_status s) {
  if (s != MF_OK) throw ApiError(s, std::string(mf_status_name(s)) + ": " + mf_last_error());
}

int exit_code_for(mf_status s) {
  switch (s) {
  case MF_ERR_SINGULAR:
  case MF_ERR_INTERNAL: return kInternal;
  default: return kInvalidConfig;
  }
}

// ---- handles --------------------------------------------------------------

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Grid = std::unique_ptr<mf_grid, Deleter<mf_grid, mf_grid_free>>;
using Field = std::unique_ptr<mf_field, Deleter<mf_field, mf_field_free>>;
using Projection = std::unique_ptr<mf_projection, Deleter<mf_projection, mf_projection_free>>;
using Report = std::unique_ptr<mf_solve_report, Deleter<mf_solve_report, mf_solve_report_free>>;
using Continuation = std::unique_ptr<mf_continuation, Deleter<mf_continuation, mf_continuation_free>>;
using Rescale = std::unique_ptr<mf_rescale, Deleter<mf_rescale, mf_rescale_free>>;

Grid make_grid(int n, double q) {
  mf_grid* g = nullptr;
  check(mf_grid_create(n, q, &g));
  return Grid(g);
}

Field read_field(const std::string& path) {
  mf_field* f = nullptr;
  check(mf_field_read_csv(path.c_str(), &f));
  return Field(f);
}

// ---- configuration --------------------------------------------------------

enum class Kind { Integer, Number, NumberList, String };

const std::map<std::string, Kind>& schema() {
  static const std::map<std::string, Kind> s = {
      {"subcommand", Kind::String}, {"n", Kind::Integer},        {"q", Kind::Number},
      {"rho", Kind::Number},        {"eps", Kind::NumberList},   {"tol", Kind::Number},
      {"max_iter", Kind::Integer},  {"r", Kind::Number},         {"R", Kind::Number},
      {"r0", Kind::Number},         {"rho_start", Kind::Number}, {"rho_end", Kind::Number},
      {"steps", Kind::Integer},     {"in", Kind::String},        {"out", Kind::String},
  };
  return s;
}

const char* kind_name(Kind k) {
  switch (k) {
  case Kind::Integer: return "an integer";
  case Kind::Number: return "a number";
  case Kind::NumberList: return "a number or an array of numbers";
  case Kind::String: return "a string";
  }
  return "?";
}

void validate_key(const std::string& key, const json& value) {
  const auto it = schema().find(key);
  if (it == schema().end()) throw ConfigError("unknown config key '" + key + "'");
  bool ok = false;
  switch (it->second) {
  case Kind::Integer: ok = value.is_number_integer(); break;
  case Kind::Number: ok = value.is_number(); break;
  case Kind::String: ok = value.is_string(); break;
  case Kind::NumberList:
    ok = value.is_number();
    if (value.is_array()) {
      ok = !value.empty();
      for (const auto& v : value) ok = ok && v.is_number();
    }
    break;
  }
  if (!ok)
    throw ConfigError("config key '" + key + "' must be " + kind_name(it->second) + ", got " +
                      std::string(value.type_name()));
}

json load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << is.rdbuf();
  json cfg;
  try {
    cfg = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at byte offset " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : cfg.items()) validate_key(k, v);
  return cfg;
}

class Config {
public:
  explicit Config(json j) : j_(std::move(j)) {}

  const json& raw() const { return j_; }

  bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  T get(const char* key, T fallback) const {
    return j_.contains(key) ? j_.at(key).get<T>() : fallback;
  }

  template <class T>
  T need(const char* key, const std::string& sub) const {
    if (!j_.contains(key)) throw ConfigError("subcommand '" + sub + "' needs --" + flag(key));
    return j_.at(key).get<T>();
  }

  std::vector<double> eps_list(std::vector<double> fallback) const {
    if (!j_.contains("eps")) return fallback;
    const auto& v = j_.at("eps");
    if (v.is_number()) return {v.get<double>()};
    return v.get<std::vector<double>>();
  }

  static std::string flag(const char* key) {
    std::string s(key);
    for (char& c : s)
      if (c == '_') c = '-';
    return s;
  }

private:
  json j_;
};

// ---- output ---------------------------------------------------------------

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Csv {
  std::ostringstream os;
  explicit Csv(const std::string& header) { os << header << '\n'; }
  template <class... T>
  void row(const T&... cols) {
    bool first = true;
    ((os << (first ? "" : ",") << cell(cols), first = false), ...);
    os << '\n';
  }
  static std::string cell(double v) { return real(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
};

void csv_field(Csv& csv, const mf_field* f) {
  const size_t n = mf_field_size(f);
  std::vector<double> r(n), v(n);
  check(mf_field_nodes(f, r.data(), n));
  check(mf_field_values(f, v.data(), n));
  for (size_t i = 0; i < n; ++i) csv.row(r[i], v[i]);
}

struct Outcome {
  int code = kOk;
  std::string status = "ok";
};

// ---- subcommands ----------------------------------------------------------

struct Context {
  std::string sub;
  Config cfg;
  std::ostream& err;
};

Outcome run_green(Context& c, Csv& csv) {
  const double r = c.cfg.get<double>("r", 0.5);
  const double x[4] = {r, 0, 0, 0}, y[4] = {0, 0, 0, 0};
  double g = 0;
  check(mf_green(x, y, &g));
  csv.row(r, g);
  return {};
}

Outcome run_robin(Context& c, Csv& csv) {
  const double r = c.cfg.get<double>("r", 0.5);
  const double x[4] = {r, 0, 0, 0}, y[4] = {0, 0, 0, 0};
  double v = 0;
  check(mf_robin(x, y, &v));
  csv.row(r, v);
  return {};
}

Grid config_grid(const Context& c, int n_default = 513, double q_default = 1.0) {
  return make_grid(c.cfg.get<int>("n", n_default), c.cfg.get<double>("q", q_default));
}

Outcome run_r1(Context& c, Csv& csv) {
  auto g = config_grid(c);
  const double p[4] = {0, 0, 0, 0};
  mf_field* f = nullptr;
  check(mf_r1_solve(p, g.get(), &f));
  Field field(f);
  csv_field(csv, field.get());
  return {};
}

Outcome run_con(Context& c, Csv& csv) {
  auto g = config_grid(c);
  const double q[4] = {0, 0, 0, 0};
  double v = 0;
  check(mf_con_value(q, g.get(), &v));
  csv.row(0, v);
  c.err << "con(0) = " << real(v) << (v > 0 ? " > 0" : " <= 0") << '\n';
  return {};
}

Outcome run_bubble_check(Context& c, Csv& csv) {
  const int n = c.cfg.get<int>("n", 1025);
  const double R = c.cfg.get<double>("R", 10.0);
  double res = 0;
  check(mf_bubble_pde_residual(n, R, 384.0, &res));
  double mass = 0, quad = 0;
  check(mf_bubble_mass(R, &mass));
  check(mf_bubble_mass_quadrature(R, n, &quad));
  csv.row(R, res);
  c.err << "max |Delta^2 u - e^u| on [0," << R << "] with n=" << n << ": " << real(res) << '\n'
        << "mass of B_R: closed form " << real(mass) << ", quadrature " << real(quad) << '\n';
  return {};
}

Outcome run_project(Context& c, Csv& csv) {
  const auto eps = c.cfg.eps_list({0.05});
  if (eps.size() != 1) throw ConfigError("project takes a single --eps");
  auto g = config_grid(c, 2049, 2.0);
  mf_projection* p = nullptr;
  check(mf_project(eps[0], g.get(), &p));
  Projection proj(p);
  mf_projection_info info;
  check(mf_projection_get_info(proj.get(), &info));
  mf_field* f = nullptr;
  check(mf_projection_projected(proj.get(), &f));
  Field field(f);
  csv_field(csv, field.get());
  c.err << "eps=" << real(info.eps) << " expansion defect=" << real(info.defect)
        << " defect/eps^4=" << real(info.defect / std::pow(info.eps, 4)) << '\n';
  return {};
}

Outcome run_energy_family(Context& c, Csv& csv) {
  const double rho = c.cfg.need<double>("rho", c.sub);
  const auto eps = c.cfg.eps_list({0.08, 0.04, 0.02, 0.01, 0.005, 0.0025});
  std::optional<Grid> g;
  if (c.cfg.has("n") || c.cfg.has("q")) g = config_grid(c, 2049, 2.0);
  std::vector<double> J(eps.size());
  check(mf_energy_family(rho, eps.data(), eps.size(), g ? g->get() : nullptr, J.data()));
  for (size_t k = 0; k < eps.size(); ++k) csv.row(eps[k], J[k]);
  return {};
}

Outcome run_solve(Context& c, Csv& csv) {
  const double rho = c.cfg.need<double>("rho", c.sub);
  auto g = config_grid(c);
  mf_solve_report* r = nullptr;
  check(mf_solve_newton(rho, g.get(), nullptr, c.cfg.get<double>("tol", 1e-10), c.cfg.get<int>("max_iter", 50), &r));
  Report rep(r);
  mf_solve_summary s;
  check(mf_solve_report_summary(rep.get(), &s));
  mf_field* f = nullptr;
  check(mf_solve_report_field(rep.get(), &f));
  Field field(f);
  csv_field(csv, field.get());
  c.err << "rho=" << real(s.rho) << " iterations=" << s.iterations << " residual=" << real(s.residual)
        << " max_u=" << real(s.max_u) << " energy=" << real(s.energy) << '\n';
  if (!s.converged) {
    c.err << "not converged: " << mf_solve_report_message(rep.get()) << '\n';
    return {kNotConverged, "not_converged"};
  }
  return {};
}

Outcome run_continue(Context& c, Csv& csv) {
  const double a = c.cfg.need<double>("rho_start", c.sub);
  const double b = c.cfg.need<double>("rho_end", c.sub);
  auto g = config_grid(c);
  mf_continuation* p = nullptr;
  check(mf_continuation_run(g.get(), a, b, c.cfg.get<int>("steps", 12), c.cfg.get<double>("tol", 1e-10), &p));
  Continuation cont(p);
  bool all = true;
  for (size_t i = 0; i < mf_continuation_size(cont.get()); ++i) {
    mf_continuation_entry e;
    check(mf_continuation_entry_at(cont.get(), i, &e));
    csv.row(e.rho, e.energy, e.max_u, e.mu, e.converged);
    all = all && e.converged;
  }
  mf_continuation_status st;
  check(mf_continuation_get_status(cont.get(), &st));
  const std::string name = mf_continuation_status_name(st);
  c.err << "continuation: " << name << " after " << mf_continuation_solves(cont.get()) << " solves\n";
  // rejected solves are not recorded as entries, so underflow is checked separately
  const bool ok = all && st != MF_CONT_STEP_UNDERFLOW;
  return {ok ? kOk : kNotConverged, name};
}

Outcome run_pohozaev(Context& c, Csv& csv) {
  auto f = read_field(c.cfg.need<std::string>("in", c.sub));
  mf_pohozaev b;
  check(mf_pohozaev_residual(f.get(), c.cfg.need<double>("rho", c.sub), c.cfg.get<double>("r", 1.0), &b));
  csv.row(b.r, b.volume_term, b.f_flux, b.half_v2, b.normal_u_v, b.mixed, b.gradient_dot, b.boundary_sum,
          b.residual);
  return {};
}

Outcome run_quantize(Context& c, Csv& csv) {
  auto f = read_field(c.cfg.need<std::string>("in", c.sub));
  const double r = c.cfg.get<double>("r", 0.5);
  double m = 0;
  check(mf_local_mass(f.get(), c.cfg.need<double>("rho", c.sub), r, &m));
  csv.row(r, m);
  return {};
}

Outcome run_rescale(Context& c, Csv& csv) {
  auto f = read_field(c.cfg.need<std::string>("in", c.sub));
  mf_rescale* p = nullptr;
  check(mf_rescale_extract(f.get(), c.cfg.need<double>("rho", c.sub), c.cfg.get<double>("R", 10.0), 401, &p));
  Rescale rs(p);
  const size_t n = mf_rescale_size(rs.get());
  std::vector<double> x(n), u(n), b(n);
  check(mf_rescale_samples(rs.get(), x.data(), u.data(), b.data(), n));
  for (size_t i = 0; i < n; ++i) csv.row(x[i], u[i], b[i]);
  double mu = 0, sup = 0;
  check(mf_rescale_summary(rs.get(), nullptr, &mu, &sup));
  c.err << "mu=" << real(mu) << " sup-distance to the standard bubble=" << real(sup) << '\n';
  return {};
}

Outcome run_farfield(Context& c, Csv& csv) {
  auto f = read_field(c.cfg.need<std::string>("in", c.sub));
  const double r0 = c.cfg.get<double>("r0", 0.3);
  double d = 0;
  check(mf_far_field_compare(f.get(), c.cfg.need<double>("rho", c.sub), r0, &d));
  csv.row(r0, d);
  return {};
}

struct Command {
  const char* header;
  Outcome (*run)(Context&, Csv&);
};

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> m = {
      {"green", {"r,value", run_green}},
      {"robin", {"r,value", run_robin}},
      {"r1", {"r,value", run_r1}},
      {"con", {"Q,value", run_con}},
      {"bubble-check", {"R,max_residual", run_bubble_check}},
      {"project", {"r,value", run_project}},
      {"energy-family", {"eps,J", run_energy_family}},
      {"solve", {"r,value", run_solve}},
      {"continue", {"rho,energy,max_u,mu,converged", run_continue}},
      {"pohozaev", {"r,volume_term,f_flux,half_v2,normal_u_v,mixed,gradient_dot,boundary_sum,residual", run_pohozaev}},
      {"quantize", {"r,local_mass", run_quantize}},
      {"rescale", {"x,rescaled,bubble", run_rescale}},
      {"farfield", {"r0,sup_distance", run_farfield}},
  };
  return m;
}

std::string usage() {
  std::string s = "usage: meanfield <subcommand> [flags]\nsubcommands:";
  for (const auto& [name, cmd] : commands()) s += " " + name;
  return s + "\n";
}

void write_manifest(const std::string& out_path, const json& config, double seconds, const Outcome& o) {
  json m;
  m["config"] = config;
  m["version"] = mf_version();
  m["wall_clock_seconds"] = seconds;
  m["status"] = o.status;
  m["exit_code"] = o.code;
  m["output"] = out_path;
  std::ofstream os(out_path + ".manifest.json");
  if (!os) throw ConfigError("cannot write manifest next to '" + out_path + "'");
  os << m.dump(2) << '\n';
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial mean field equation on the unit ball of R^4", "meanfield"};
  std::string sub, config_path, in, out_path;
  int n = 0, max_iter = 0, steps = 0;
  double q = 0, rho = 0, tol = 0, r = 0, R = 0, r0 = 0, rho_start = 0, rho_end = 0;
  std::vector<double> eps;
  app.add_option("subcommand", sub, "operation to run");
  app.add_option("--config", config_path, "JSON configuration file");
  std::map<std::string, CLI::Option*> flags;
  flags["n"] = app.add_option("--n", n, "grid nodes");
  flags["q"] = app.add_option("--q", q, "grid grading exponent");
  flags["rho"] = app.add_option("--rho", rho, "mass parameter");
  flags["eps"] = app.add_option("--eps", eps, "bubble concentration scale(s)");
  flags["tol"] = app.add_option("--tol", tol, "solver tolerance");
  flags["max_iter"] = app.add_option("--max-iter", max_iter, "iteration limit");
  flags["r"] = app.add_option("--r", r, "radius");
  flags["R"] = app.add_option("--R", R, "outer radius (bubble scale)");
  flags["r0"] = app.add_option("--r0", r0, "inner radius of the far field");
  flags["rho_start"] = app.add_option("--rho-start", rho_start, "continuation start");
  flags["rho_end"] = app.add_option("--rho-end", rho_end, "continuation end");
  flags["steps"] = app.add_option("--steps", steps, "nominal continuation steps");
  flags["in"] = app.add_option("--in", in, "input field CSV");
  flags["out"] = app.add_option("--out", out_path, "output CSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help() << usage();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << usage();
    return kInvalidConfig;
  }

  json merged = json::object();
  try {
    if (!config_path.empty()) merged = load_config(config_path);
    if (!sub.empty()) merged["subcommand"] = sub;
    auto set = [&](const char* key, const json& v) {
      if (flags.at(key)->count() > 0) merged[key] = v;
    };
    set("n", n);
    set("q", q);
    set("rho", rho);
    set("eps", eps);
    set("tol", tol);
    set("max_iter", max_iter);
    set("r", r);
    set("R", R);
    set("r0", r0);
    set("rho_start", rho_start);
    set("rho_end", rho_end);
    set("steps", steps);
    set("in", in);
    set("out", out_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }

  const std::string name = merged.value("subcommand", std::string());
  const auto it = commands().find(name);
  if (it == commands().end()) {
    err << "error: " << (name.empty() ? "no subcommand given" : "unknown subcommand '" + name + "'") << '\n'
        << usage();
    return kInvalidConfig;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Context ctx{name, Config(merged), err};
  Csv csv(it->second.header);
  Outcome outcome;
  try {
    outcome = it->second.run(ctx, csv);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const ApiError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.status);
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string dest = merged.value("out", std::string());
  if (dest.empty()) {
    out << csv.os.str();
    return outcome.code;
  }
  std::ofstream os(dest, std::ios::binary);
  if (!os) {
    err << "error: cannot write '" << dest << "'\n";
    return kInvalidConfig;
  }
  os << csv.os.str();
  os.close();
  try {
    write_manifest(dest, merged, seconds, outcome);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }
  err << "wrote " << dest << '\n';
  return outcome.code;
}

int dispatch(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args, out, err);
}

} // namespace mfcli
