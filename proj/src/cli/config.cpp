#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cohprop/cli.hpp"

namespace cohprop::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\"'");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\"'");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, const char* what) {
  const std::string s = trim(raw);
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(x)) {
    throw ConfigError(std::string("invalid ") + what + ": '" + raw + "'");
  }
  return x;
}

int parse_int(const std::string& raw, const char* what) {
  const std::string s = trim(raw);
  int x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(std::string("invalid ") + what + ": '" + raw + "'");
  }
  return x;
}

Command parse_command(const std::string& name) {
  if (name == "symbols") return Command::Symbols;
  if (name == "propagate") return Command::Propagate;
  if (name == "compare") return Command::Compare;
  if (name == "scan") return Command::Scan;
  if (name == "discrete") return Command::Discrete;
  throw ConfigError("unknown command '" + name + "' (expected symbols, propagate, compare, scan or discrete)");
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  if (name == "text") return Format::Text;
  throw ConfigError("unknown format '" + name + "' (expected json, csv or text)");
}

// key=value lines, '#' comments, keys named like the long flags without the
// dashes. Returned as "--key=value" tokens so that flags given later on the
// command line win under the take-last policy.
std::vector<std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!value.empty() && value.back() == '\r') value.pop_back();
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": missing key");
    if (key == "config") throw ConfigError(path + ":" + std::to_string(lineno) + ": config files do not nest");
    tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

}  // namespace

std::vector<double> TimeRange::points() const {
  std::vector<double> ts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) ts[i] = i + 1 == count ? stop : start + (stop - start) * i / (count - 1);
  return ts;
}

cplx parse_complex(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_number(parts[0], "complex value"), 0.0};
  if (parts.size() != 2) throw ConfigError("complex values are written re,im: '" + text + "'");
  return {parse_number(parts[0], "real part"), parse_number(parts[1], "imaginary part")};
}

TimeRange parse_time_range(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ConfigError("--time-range expects START,STOP,COUNT: '" + text + "'");
  return {parse_number(parts[0], "range start"), parse_number(parts[1], "range stop"),
          parse_int(parts[2], "range count")};
}

std::vector<Method> parse_methods(const std::string& text) {
  if (trim(text) == "all") return {Method::EXACT, Method::Q, Method::P, Method::MIXED, Method::WEYL};
  std::vector<Method> out;
  for (const std::string& part : split(text, ',')) {
    const auto m = parse_method(trim(part));
    if (!m) throw ConfigError("unknown method '" + part + "' (expected exact, q, p, mixed, weyl)");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw ConfigError("at least one method must be selected");
  return out;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& part : split(text, ',')) out.push_back(parse_int(part, "N"));
  if (out.empty()) throw ConfigError("--n-list is empty");
  return out;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Coherent-state propagators: exact and semiclassical", "cohprop"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RunConfig cfg;
  std::string command, z1 = "0,0", z2 = "0,0", range, methods, n_list, grid, format;
  std::optional<double> time;
  app.add_option("command", command, "symbols | propagate | compare | scan | discrete")->required();
  app.add_option("--hamiltonian", cfg.hamiltonian, "expression in q, p, a, ad");
  app.add_option("--hbar", cfg.hbar);
  app.add_option("--mass", cfg.mass);
  app.add_option("--omega", cfg.omega);
  app.add_option("--z1", z1, "initial label re,im");
  app.add_option("--z2", z2, "final label re,im");
  app.add_option("--time", time);
  app.add_option("--time-range", range, "START,STOP,COUNT");
  app.add_option("--methods", methods, "comma list of exact,q,p,mixed,weyl or all");
  app.add_option("--n-list", n_list, "comma list of even N");
  app.add_option("--tol-shoot", cfg.tol_shoot);
  app.add_option("--tol-ode", cfg.tol_ode);
  app.add_option("--tol-trunc", cfg.tol_trunc);
  app.add_option("--grid", grid, "SIZE[,SPREAD]");
  app.add_option("--continuation", cfg.continuation, "endpoint-homotopy stages seeding the saddle search");
  app.add_flag("--principal-only", cfg.principal_only, "keep only the saddle reached by --continuation");
  app.add_option("--output", cfg.output);
  app.add_option("--format", format, "json | csv | text");
  app.add_option("--jobs", cfg.jobs);
  app.add_flag("--strict", cfg.strict, "exit 4 when any method or point fails");
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; command-line flags take precedence");

  // The config file is spliced in ahead of the command-line arguments.
  std::vector<std::string> given;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config") {
      if (i + 1 >= argc) throw ConfigError("--config needs a path");
      config_path = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_path = a.substr(9);
    } else {
      given.push_back(a);
    }
  }
  std::vector<std::string> ordered;
  if (!config_path.empty()) ordered = read_config_file(config_path);
  ordered.insert(ordered.end(), given.begin(), given.end());
  std::vector<std::string> args(ordered.rbegin(), ordered.rend());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  cfg.command = parse_command(command);
  cfg.z1 = parse_complex(z1);
  cfg.z2 = parse_complex(z2);
  cfg.time = time;
  if (!range.empty()) cfg.time_range = parse_time_range(range);
  if (!methods.empty()) cfg.methods = parse_methods(methods);
  if (!n_list.empty()) cfg.n_list = parse_n_list(n_list);
  if (!grid.empty()) {
    const auto parts = split(grid, ',');
    if (parts.empty() || parts.size() > 2) throw ConfigError("--grid expects SIZE[,SPREAD]");
    cfg.grid_size = parse_int(parts[0], "grid size");
    if (parts.size() == 2) cfg.grid_spread = parse_number(parts[1], "grid spread");
  }
  if (!format.empty()) cfg.format = parse_format(format);
  return cfg;
}

void validate(const RunConfig& c) {
  if (trim(c.hamiltonian).empty()) throw ConfigError("--hamiltonian is required");
  for (double x : {c.hbar, c.mass, c.omega})
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("hbar, mass and omega must be positive");
  for (double x : {c.tol_shoot, c.tol_ode, c.tol_trunc})
    if (!(x > 0.0)) throw ConfigError("tolerances must be positive");
  if (c.grid_size < 1) throw ConfigError("grid size must be positive");
  if (c.grid_spread && !(*c.grid_spread > 0.0)) throw ConfigError("grid spread must be positive");
  if (c.jobs < 0) throw ConfigError("--jobs must be non-negative");
  if (c.continuation < 0) throw ConfigError("--continuation must be non-negative");
  if (c.principal_only && c.continuation == 0) throw ConfigError("--principal-only needs --continuation STEPS");
  switch (c.command) {
    case Command::Symbols:
      break;
    case Command::Propagate:
    case Command::Compare:
      if (!c.time) throw ConfigError("--time is required");
      if (!(*c.time >= 0.0)) throw ConfigError("--time must be non-negative");
      break;
    case Command::Scan:
      if (!c.time_range) throw ConfigError("scan requires --time-range START,STOP,COUNT");
      if (c.time_range->count < 2) throw ConfigError("--time-range COUNT must be at least 2");
      if (!(c.time_range->start >= 0.0) || !(c.time_range->stop > c.time_range->start)) {
        throw ConfigError("--time-range needs 0 <= START < STOP");
      }
      break;
    case Command::Discrete:
      if (!c.time) throw ConfigError("--time is required");
      if (!(*c.time >= 0.0)) throw ConfigError("--time must be non-negative");
      for (int N : c.n_list)
        if (N < 4 || N % 2 != 0) throw ConfigError("--n-list entries must be even and at least 4");
      break;
  }
}

}  // namespace cohprop::cli
