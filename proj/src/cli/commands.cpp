#include <atomic>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <thread>

#include "cohprop/cli.hpp"
#include "cohprop/discrete.hpp"
#include "cohprop/serialize.hpp"

namespace cohprop::cli {

namespace {

using json = nlohmann::ordered_json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return s;
}

SearchConfig search_config(const RunConfig& c) {
  SearchConfig s;
  s.grid_size = c.grid_size;
  s.spread = c.grid_spread;
  s.shoot.tol = c.tol_shoot;
  s.shoot.ode.rtol = c.tol_ode;
  s.shoot.ode.atol = c.tol_ode * 1e-2;
  s.continuation_steps = c.continuation;
  s.principal_only = c.principal_only;
  return s;
}

TruncationOptions truncation_options(const RunConfig& c) {
  TruncationOptions t;
  t.tol = c.tol_trunc;
  return t;
}

unsigned worker_count(const RunConfig& c) {
  return c.jobs > 0 ? static_cast<unsigned>(c.jobs) : std::max(1u, std::thread::hardware_concurrency());
}

json config_json(const RunConfig& c) {
  json j;
  j["hamiltonian"] = c.hamiltonian;
  j["hbar"] = c.hbar;
  j["mass"] = c.mass;
  j["omega"] = c.omega;
  j["z1"] = json::array({c.z1.real(), c.z1.imag()});
  j["z2"] = json::array({c.z2.real(), c.z2.imag()});
  if (c.time) j["time"] = *c.time;
  return j;
}

int cmd_symbols(const RunConfig& c, const OperatorPoly& op, std::ostream& out) {
  const std::pair<const char*, SymbolPoly> rows[] = {
      {"H_Q", q_symbol(op)}, {"H_P", p_symbol(op)}, {"H_W", weyl_symbol(op)}, {"H_C", effective_symbol(op)}};
  if (c.format.value_or(Format::Text) == Format::Json) {
    json j;
    for (const auto& [name, sym] : rows) {
      j[name] = {{"uv", to_string(sym)}, {"qp", to_string(to_phase_space(sym))}};
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  for (const auto& [name, sym] : rows) out << name << "(u,v) = " << to_string(sym) << '\n';
  for (const auto& [name, sym] : rows) out << name << "(q,p) = " << to_string(to_phase_space(sym)) << '\n';
  return kOk;
}

int failure_code(const RunConfig& c, std::size_t failed, std::size_t total) {
  if (total > 0 && failed == total) return kAllFailed;
  if (failed > 0 && c.strict) return kPartialFailure;
  return kOk;
}

int cmd_propagate(const RunConfig& c, const OperatorPoly& op, std::ostream& out, std::ostream& err) {
  CompareOptions opts;
  opts.methods = c.methods;
  if (opts.methods.empty()) {
    opts.methods = c.command == Command::Compare
                       ? std::vector<Method>{Method::EXACT, Method::Q, Method::P, Method::MIXED, Method::WEYL}
                       : std::vector<Method>{Method::EXACT, Method::MIXED};
  }
  if (c.command == Command::Compare && std::find(opts.methods.begin(), opts.methods.end(), Method::EXACT) ==
                                            opts.methods.end()) {
    opts.methods.insert(opts.methods.begin(), Method::EXACT);
  }
  opts.search = search_config(c);
  opts.truncation = truncation_options(c);
  opts.parallel = worker_count(c) > 1;
  const std::vector<MethodOutcome> outcomes = compare_methods(op, c.z1, c.z2, *c.time, opts);

  std::size_t failed = 0;
  for (const MethodOutcome& o : outcomes) {
    if (!o.result) {
      ++failed;
      err << "warning: method " << to_string(o.method) << " failed: " << o.error << '\n';
    }
  }

  if (c.format.value_or(Format::Json) == Format::Csv) {
    out << "method,re_K,im_K,abs_K,abs_err_vs_exact,n_trajectories,error\n";
    for (const MethodOutcome& o : outcomes) {
      out << to_string(o.method) << ',';
      if (o.result) {
        const cplx K = o.result->value;
        out << num(K.real()) << ',' << num(K.imag()) << ',' << num(std::abs(K)) << ','
            << num(o.abs_err.value_or(NAN)) << ',' << o.result->trajectories.size() << ",\n";
      } else {
        out << "nan,nan,nan,nan,0," << csv_safe(o.error) << '\n';
      }
    }
  } else {
    json j;
    j["command"] = c.command == Command::Compare ? "compare" : "propagate";
    j["config"] = config_json(c);
    j["results"] = to_json(outcomes);
    out << j.dump(2) << '\n';
  }
  return failure_code(c, failed, outcomes.size());
}

struct ScanPoint {
  std::vector<MethodOutcome> outcomes;
  std::string warning;
};

int cmd_scan(const RunConfig& c, const OperatorPoly& op, std::ostream& out, std::ostream& err) {
  const std::vector<double> times = c.time_range->points();
  std::vector<Method> methods = c.methods;
  if (methods.empty()) methods = {Method::EXACT, Method::MIXED};
  const bool has_exact = std::find(methods.begin(), methods.end(), Method::EXACT) != methods.end();

  std::optional<ExactOracle> oracle;
  if (has_exact && op.is_hermitian()) oracle.emplace(op);

  CompareOptions opts;
  opts.methods = methods;
  opts.search = search_config(c);
  opts.truncation = truncation_options(c);
  opts.oracle = oracle ? &*oracle : nullptr;
  opts.parallel = false;

  std::vector<ScanPoint> points(times.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < times.size(); i = next++) {
      ScanPoint& p = points[i];
      p.outcomes = compare_methods(op, c.z1, c.z2, times[i], opts);
      for (const MethodOutcome& o : p.outcomes) {
        if (o.result) continue;
        if (!p.warning.empty()) p.warning += "; ";
        p.warning += std::string(to_string(o.method)) + ": " + o.error;
      }
    }
  };
  const unsigned n_workers = std::min<unsigned>(worker_count(c), static_cast<unsigned>(times.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  std::size_t failed = 0, total = 0;
  for (const ScanPoint& p : points) {
    for (const MethodOutcome& o : p.outcomes) {
      ++total;
      if (!o.result) ++failed;
    }
  }
  if (failed > 0) err << "warning: " << failed << " of " << total << " method evaluations failed\n";

  if (c.format.value_or(Format::Csv) == Format::Json) {
    json rows = json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
      json r;
      r["T"] = times[i];
      r["results"] = to_json(points[i].outcomes);
      rows.push_back(std::move(r));
    }
    json j;
    j["command"] = "scan";
    j["config"] = config_json(c);
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
  } else {
    out << "T";
    for (Method m : methods) {
      const std::string n(to_string(m));
      out << ',' << n << "_re_K," << n << "_im_K," << n << "_abs_K";
      if (has_exact && m != Method::EXACT) out << ',' << n << "_err_vs_exact";
    }
    out << ",warning\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
      out << num(times[i]);
      for (const MethodOutcome& o : points[i].outcomes) {
        const cplx K = o.result ? o.result->value : cplx{NAN, NAN};
        out << ',' << num(K.real()) << ',' << num(K.imag()) << ',' << num(o.result ? std::abs(K) : NAN);
        if (has_exact && o.method != Method::EXACT) out << ',' << num(o.abs_err.value_or(NAN));
      }
      out << ',' << csv_safe(points[i].warning) << '\n';
    }
  }
  return failure_code(c, failed, total);
}

int cmd_discrete(const RunConfig& c, const OperatorPoly& op, std::ostream& out, std::ostream& err) {
  DiscreteOptions dopts;
  dopts.ode.rtol = c.tol_ode;
  dopts.ode.atol = c.tol_ode * 1e-2;
  const SweepReport report =
      convergence_sweep(op, c.z1, c.z2, *c.time, c.n_list, search_config(c), dopts, static_cast<int>(worker_count(c)));
  std::size_t failed = 0;
  for (const SweepRow& r : report.rows)
    if (!r.error.empty()) ++failed;
  if (!report.error.empty()) err << "warning: " << report.error << '\n';

  if (c.format.value_or(Format::Csv) == Format::Json) {
    json rows = json::array();
    for (const SweepRow& r : report.rows) {
      json jr;
      jr["N"] = r.N;
      jr["tau"] = r.tau;
      jr["residual_norm"] = r.residual_norm;
      jr["re_gamma"] = r.gamma.real();
      jr["im_gamma"] = r.gamma.imag();
      jr["err_vs_continuum"] = r.err_vs_continuum;
      jr["collapse_defect"] = r.collapse_defect;
      jr["hef_residual"] = r.hef_residual;
      if (!r.error.empty()) jr["error"] = r.error;
      rows.push_back(std::move(jr));
    }
    json j;
    j["command"] = "discrete";
    j["config"] = config_json(c);
    j["continuum_gamma"] = json::array({report.continuum.real(), report.continuum.imag()});
    j["loglog_slope"] = report.slope;
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
  } else {
    write_sweep_csv(out, report);
    err << "log-log slope of err_vs_continuum against N: " << num(report.slope) << '\n';
  }
  return failure_code(c, failed, report.rows.size());
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ScaleParams scales(c.hbar, c.mass, c.omega);
  const OperatorPoly op = parse_hamiltonian(c.hamiltonian, scales);
  if (c.command != Command::Symbols && !op.is_hermitian()) {
    throw ConfigError("the Hamiltonian is not Hermitian");
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!c.output.empty()) {
    file.open(c.output);
    if (!file) throw ConfigError("cannot open output file '" + c.output + "'");
    sink = &file;
  }
  switch (c.command) {
    case Command::Symbols: return cmd_symbols(c, op, *sink);
    case Command::Propagate:
    case Command::Compare: return cmd_propagate(c, op, *sink, err);
    case Command::Scan: return cmd_scan(c, op, *sink, err);
    case Command::Discrete: return cmd_discrete(c, op, *sink, err);
  }
  return kOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<RunConfig> cfg = parse_args(argc, argv, out);
    if (!cfg) return kOk;
    validate(*cfg);
    return run(*cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ScaleMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DegreeError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kAllFailed;
  }
}

}  // namespace cohprop::cli
