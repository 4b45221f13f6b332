#pragma once

// Command-line front end. `run` is separate from argument parsing so tests can drive it
// in-process with their own streams.
//
// Exit status: 0 success, 1 verification failure or unsolvable input,
// 2 usage error, 3 numerical non-convergence.

#include <catenoid/geometry.hpp>
#include <catenoid/index_engine.hpp>
#include <catenoid/parallel.hpp>
#include <catenoid/report.hpp>
#include <catenoid/sturm_liouville.hpp>
#include <catenoid/verification.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace catenoid::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, usage_error = 2, not_converged = 3 };

struct RunConfig {
  std::string command;
  std::size_t grid_n = 1024;
  int modes = 10;
  double tol = 1e-4;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::string chart = "s";
  std::string input;  // boundary-data CSV for `dirichlet` (optional for `report`)
  std::size_t threads = 1;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"constants", "spectrum", "index", "dirichlet", "verify", "report"};
  return names;
}

/// Empty when valid, otherwise the reason.
inline std::string validate(const RunConfig& cfg) {
  if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end()) {
    return "unknown command '" + cfg.command + "'";
  }
  if (cfg.grid_n < 64) return "--grid-n must be at least 64";
  if (cfg.modes < 2) return "--modes must be at least 2";
  if (!(cfg.tol > 0.0 && cfg.tol <= 0.1)) return "--tol must lie in (0, 0.1]";
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "text") return "--format must be json, csv or text";
  if (cfg.chart != "s" && cfg.chart != "phi") return "--chart must be s or phi";
  if (cfg.command == "dirichlet" && cfg.input.empty()) return "dirichlet needs --input <boundary data csv>";
  if (cfg.threads == 0) return "--threads must be positive";
  return {};
}

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string sci(double v) { return format_float(v); }

namespace detail {

struct Section {
  std::string name;
  json data;
  std::string text;
  std::string csv;
  int status = ok;
};

inline Section constants_section() {
  const CriticalParams& p = critical_catenoid();
  Section s{"constants", constants_json(p), {}, {}, ok};
  const std::vector<std::pair<std::string, double>> rows{{"T", p.T},
                                                         {"a", p.a},
                                                         {"phi_star", p.phi_star},
                                                         {"1/sinh^2 T", 1.0 / (p.sinhT * p.sinhT)},
                                                         {"4 pi / T", 4.0 * pi / p.T},
                                                         {"8 pi / T", 8.0 * pi / p.T}};
  s.csv = "name,value\n";
  for (const auto& [name, v] : rows) {
    s.text += name + " = " + fmt("%.12g", v) + "\n";
    s.csv += name + "," + sci(v) + "\n";
  }
  return s;
}

inline Section spectrum_section(const RunConfig& cfg) {
  const CriticalParams& p = critical_catenoid();
  const Chart chart = cfg.chart == "phi" ? Chart::phi : Chart::s;
  const Grid1D grid = Grid1D::uniform(chart, cfg.grid_n, p);
  const auto steklov = steklov_spectrum_J(cfg.modes, Grid1D::uniform(Chart::s, cfg.grid_n, p), p, cfg.threads);
  const auto n_modes = static_cast<std::size_t>(cfg.modes) + 1;
  std::vector<std::vector<double>> dir(n_modes);
  std::vector<std::vector<double>> rob(n_modes);
  parallel_for(n_modes, cfg.threads, [&](std::size_t n) {
    const int m = static_cast<int>(n);
    dir[n] = pencil_eigs(assemble(ModeProblem::make(m, chart, BoundaryCondition::dirichlet), grid, p), 3, 1e-12);
    rob[n] = pencil_eigs(assemble(ModeProblem::make(m, chart, BoundaryCondition::robin), grid, p), 3, 1e-12);
  });

  Section s{"spectrum", json::object(), {}, "mode,problem,k,value\n", ok};
  json modes = json::array();
  s.text = "chart " + cfg.chart + ", " + std::to_string(cfg.grid_n) + " nodes (Steklov in the s chart)\n";
  for (std::size_t n = 0; n < n_modes; ++n) {
    modes.push_back(json{{"mode", n},
                         {"dirichlet", dir[n]},
                         {"robin", rob[n]},
                         {"steklov", steklov[n].eigenvalues},
                         {"steklov_singular_even_channel", steklov[n].singular_even_channel}});
    auto line = [&](const std::string& name, const std::vector<double>& v) {
      std::string t = "  " + name + ":";
      for (std::size_t k = 0; k < v.size(); ++k) {
        t += " " + fmt("%.10g", v[k]);
        s.csv += std::to_string(n) + "," + name + "," + std::to_string(k + 1) + "," + sci(v[k]) + "\n";
      }
      return t + "\n";
    };
    s.text += "mode " + std::to_string(n) + "\n" + line("dirichlet", dir[n]) + line("robin", rob[n]) +
              line("steklov", steklov[n].eigenvalues);
    if (steklov[n].singular_even_channel) s.text += "  steklov even channel: singular (Dirichlet kernel)\n";
  }
  s.data = json{{"chart", cfg.chart}, {"grid_size", cfg.grid_n}, {"modes", modes}};
  return s;
}

inline Section index_section(const RunConfig& cfg) {
  const CriticalParams& p = critical_catenoid();
  const Chart chart = cfg.chart == "phi" ? Chart::phi : Chart::s;
  const IndexReport r = morse_index(cfg.modes, Grid1D::uniform(chart, cfg.grid_n, p), p,
                                    IndexOptions{BoundaryCondition::robin, cfg.tol, cfg.threads});
  Section s{"index", to_json(r), {}, "mode,negative,near_zero,lowest_1,lowest_2\n", ok};
  s.text = "Robin negative counts per mode:";
  for (std::size_t n = 0; n < r.per_mode_negative.size(); ++n) {
    s.text += " " + std::to_string(r.per_mode_negative[n]);
    const auto& l = r.lowest_eigenvalues[n];
    s.csv += std::to_string(n) + "," + std::to_string(r.per_mode_negative[n]) + "," +
             std::to_string(r.per_mode_near_zero[n]) + "," + sci(l.size() > 0 ? l[0] : no_value) + "," +
             sci(l.size() > 1 ? l[1] : no_value) + "\n";
  }
  s.text += "\nindex = " + std::to_string(r.total_index) + " (modes n >= 1 counted twice)\n";
  s.text += "near-zero eigenvalues = " + std::to_string(r.total_near_zero) + " (|lambda| <= " + fmt("%.3e", r.zero_threshold) + ")\n";
  s.text += "counts on " + std::to_string(r.refinement_grid_sizes[0]) + "/" + std::to_string(r.refinement_grid_sizes[1]) +
            "/" + std::to_string(r.refinement_grid_sizes[2]) + " nodes: " + (r.converged ? "stable" : "NOT stable") + "\n";
  s.text += "discretization error estimate " + fmt("%.3e", r.discretization_error) + " (tol " + fmt("%.1e", r.tol) +
            (r.resolved ? ", resolved)\n" : ", NOT resolved)\n");
  if (!r.converged || !r.resolved) s.status = not_converged;
  return s;
}

inline Section dirichlet_section(const RunConfig& cfg) {
  std::ifstream in(cfg.input);
  if (!in) throw std::invalid_argument("cannot open boundary data file '" + cfg.input + "'");
  const auto data = parse_boundary_csv(in);
  const CriticalParams& p = critical_catenoid();
  const DirichletSolution sol = solve_dirichlet(data, Grid1D::uniform(Chart::s, cfg.grid_n, p), p);
  Section s{"dirichlet", to_json(sol), {}, {}, ok};
  s.csv =
      "mode,cos_or_sin,value_at_plusT,value_at_minusT,normal_derivative_at_plusT,normal_derivative_at_minusT,"
      "reference_error\n";
  for (const auto& m : sol.modes) {
    const std::string ang = to_string(m.data.angular);
    s.text += "mode " + std::to_string(m.data.mode) + " " + ang + ": u(+T) = " + fmt("%.10g", m.profile.back()) +
              ", u(-T) = " + fmt("%.10g", m.profile.front()) + ", du/dnu(+T) = " + fmt("%.10g", m.normal_plus) +
              ", du/dnu(-T) = " + fmt("%.10g", m.normal_minus) + "\n";
    s.csv += std::to_string(m.data.mode) + "," + ang + "," + sci(m.profile.back()) + "," + sci(m.profile.front()) + "," +
             sci(m.normal_plus) + "," + sci(m.normal_minus) + "," + sci(m.reference_error) + "\n";
  }
  s.text += "flux = " + fmt("%.3e", sol.flux) + "\n";
  s.csv += "# flux = " + sci(sol.flux) + "\n";
  return s;
}

inline Section verify_section(const RunConfig& cfg) {
  const VerificationReport rep = run_verification(VerifyConfig{cfg.grid_n, cfg.modes, cfg.tol, cfg.seed, cfg.threads});
  Section s{"verify", to_json(rep), {}, "criterion,check,pass,actual,expected,tolerance\n", ok};
  for (const auto& c : rep.criteria) {
    s.text += std::string(c.pass() ? "PASS" : "FAIL") + " " + fmt("%2.0f", c.number) + "  " + c.title +
              (c.not_converged ? "  [not converged]" : "") + "\n";
    for (const auto& k : c.checks) {
      const bool timing = k.name.find("[s]") != std::string::npos;
      if (!k.pass) {
        s.text += "      " + k.name + ": actual " + fmt("%.6e", k.actual) + ", expected " +
                  (std::isnan(k.expected) ? std::string("-") : fmt("%.6e", k.expected)) + ", tolerance " +
                  fmt("%.3e", k.tolerance) + "\n";
      }
      s.csv += std::to_string(c.number) + ",\"" + k.name + "\"," + (k.pass ? "1" : "0") + "," +
               (timing ? std::string("null") : sci(k.actual)) + "," + sci(k.expected) + "," + sci(k.tolerance) + "\n";
    }
  }
  s.text += rep.not_converged() ? "discretization NOT converged at this resolution\n"
             : rep.pass()       ? "all criteria passed\n"
                                : "verification FAILED\n";
  if (rep.not_converged()) {
    s.status = not_converged;
  } else if (!rep.pass()) {
    s.status = verification_failed;
  }
  return s;
}

inline void emit(const std::vector<Section>& sections, const std::string& format, bool single, std::ostream& out) {
  if (format == "json") {
    if (single) {
      out << canonical_dump(sections.front().data);
    } else {
      json doc = json::object();
      for (const auto& s : sections) doc[s.name] = s.data;
      out << canonical_dump(doc);
    }
    return;
  }
  for (std::size_t i = 0; i < sections.size(); ++i) {
    if (!single) out << (i ? "\n" : "") << (format == "csv" ? "# " : "== ") << sections[i].name << "\n";
    out << (format == "csv" ? sections[i].csv : sections[i].text);
  }
}

}  // namespace detail

/// Executes a validated configuration, writing the report to `out` and diagnostics to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (const std::string why = validate(cfg); !why.empty()) {
    err << "error: " << why << "\n";
    return usage_error;
  }
  try {
    std::vector<detail::Section> sections;
    if (cfg.command == "constants") sections.push_back(detail::constants_section());
    if (cfg.command == "spectrum") sections.push_back(detail::spectrum_section(cfg));
    if (cfg.command == "index") sections.push_back(detail::index_section(cfg));
    if (cfg.command == "dirichlet") sections.push_back(detail::dirichlet_section(cfg));
    if (cfg.command == "verify") sections.push_back(detail::verify_section(cfg));
    if (cfg.command == "report") {
      sections.push_back(detail::constants_section());
      sections.push_back(detail::spectrum_section(cfg));
      sections.push_back(detail::index_section(cfg));
      if (!cfg.input.empty()) sections.push_back(detail::dirichlet_section(cfg));
      sections.push_back(detail::verify_section(cfg));
    }
    detail::emit(sections, cfg.format, cfg.command != "report", out);
    int status = ok;
    for (const auto& s : sections) {
      if (s.status == not_converged) return not_converged;
      status = std::max(status, s.status);
    }
    return status;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return verification_failed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }
}

/// Parses argv into `cfg`. Returns an exit code when the process should stop
/// (help requested or a parse error), std::nullopt otherwise.
inline std::optional<int> parse(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out,
                                std::ostream& err) {
  CLI::App app{"Spectral checks for the critical catenoid in the unit ball", "catenoid"};
  cfg.threads = threads_from_env();
  app.add_option("command", cfg.command, "constants | spectrum | index | dirichlet | verify | report")->required();
  app.add_option("--grid-n", cfg.grid_n, "grid nodes (>= 64)")->capture_default_str();
  app.add_option("--modes", cfg.modes, "largest Fourier mode (>= 2)")->capture_default_str();
  app.add_option("--tol", cfg.tol, "discretization tolerance in (0, 0.1]")->capture_default_str();
  app.add_option("--format", cfg.format, "json | csv | text")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for sampled checks")->capture_default_str();
  app.add_option("--chart", cfg.chart, "s | phi (spectrum and index)")->capture_default_str();
  app.add_option("--input", cfg.input, "boundary data CSV (dirichlet, report)");
  app.add_option("--threads", cfg.threads, "per-mode worker threads (default: THREADS or 1)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return usage_error;
  }
  if (const std::string why = validate(cfg); !why.empty()) {
    err << "error: " << why << "\n" << app.help();
    return usage_error;
  }
  return std::nullopt;
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  if (const auto code = parse(argc, argv, cfg, out, err)) return *code;
  return run(cfg, out, err);
}

}  // namespace catenoid::cli
