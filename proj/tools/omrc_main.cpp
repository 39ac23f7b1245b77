#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "omrc/experiment.hpp"
#include "omrc/numerics/linalg.hpp"

namespace {

using omrc::format_number;

// Positional arguments are either key=value overrides or the config path.
struct Invocation {
  std::string config = "paper_eq28";
  std::vector<std::string> overrides;

  void absorb(const std::vector<std::string>& args) {
    for (const auto& arg : args) {
      if (arg.find('=') != std::string::npos) {
        overrides.push_back(arg);
      } else {
        config = arg;
      }
    }
  }
};

std::filesystem::path output_root() {
  if (const char* root = std::getenv("OMRC_OUTPUT_ROOT")) return root;
  return "omrc_out";
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y%m%dT%H%M%S");
  return out.str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) omrc::throw_error(omrc::ErrorKind::kIoError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::string spectrum_text(const std::vector<std::complex<double>>& spectrum) {
  std::ostringstream out;
  for (const auto& z : spectrum) out << "  " << format_number(z.real()) << (z.imag() < 0 ? " - " : " + ")
                                     << format_number(std::abs(z.imag())) << "j\n";
  return out.str();
}

std::string row_text(const omrc::MatrixXd& m) {
  std::ostringstream out;
  out << '[';
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? ", " : "") << format_number(m(0, j));
  out << ']';
  return out.str();
}

nlohmann::json gains_json(const omrc::GainSet& g) {
  std::vector<double> kp(g.k_p.data(), g.k_p.data() + g.k_p.size());
  return {{"partition", std::string(omrc::to_string(g.partition))}, {"k_p", kp}, {"k_c", g.k_c(0, 0)}};
}

int cmd_synth(const Invocation& inv) {
  const auto config = omrc::load_config(inv.config, inv.overrides);
  const auto out = omrc::synthesize(config);
  const auto& c = out.candidates;
  std::cout << "residual: " << format_number(out.certificate.residual) << '\n'
            << "hurwitz: " << (out.certificate.hurwitz ? "true" : "false") << '\n'
            << "solve time [s]: " << format_number(out.seconds) << '\n';
  for (const auto* g : {&c.last_column, &c.error_column}) {
    std::cout << omrc::to_string(g->partition) << ": k_p = " << row_text(g->k_p)
              << ", k_c = " << format_number(g->k_c(0, 0)) << '\n';
  }
  std::cout << "closed-loop spectrum:\n" << spectrum_text(out.certificate.spectrum);
  std::cout << "observer spectrum (A - L C):\n"
            << spectrum_text(omrc::eigenvalues(config.a - out.observer_gain * config.c));
  const bool ok = out.certificate.residual < config.tol_care && out.certificate.hurwitz;
  return ok ? 0 : 1;
}

int cmd_run(const Invocation& inv, const std::string& name) {
  const auto config = omrc::load_config(inv.config, inv.overrides);
  auto synthesis = omrc::synthesize(config);
  omrc::resolve_partition(config, synthesis);
  const auto& gains = synthesis.candidates.principal_gains();
  const auto run = omrc::run_config(config, gains, synthesis.augmented, name);

  const auto dir = output_root();
  std::filesystem::create_directories(dir);
  omrc::export_csv(run.trace, dir / (name + ".csv"));
  nlohmann::json report = omrc::to_json(run.metrics);
  report["label"] = name;
  report["gains"] = gains_json(gains);
  report["runtime_seconds"] = run.seconds;
  report["config"] = omrc::to_json(config);
  write_json(dir / (name + ".json"), report);
  std::cout << "rmse " << format_number(run.metrics.rmse) << "  mse " << format_number(run.metrics.mse)
            << "  mae " << format_number(run.metrics.mae) << "  events " << run.metrics.event_count << '\n'
            << "wrote " << (dir / (name + ".csv")).string() << " and " << (dir / (name + ".json")).string()
            << '\n';
  return 0;
}

int cmd_compare(const Invocation& inv, const std::vector<std::string>& modes, bool parallel) {
  if (modes.size() < 2) omrc::throw_error(omrc::ErrorKind::kConfigError, "compare needs at least two modes");
  std::vector<omrc::Variant> variants;
  for (const auto& m : modes) variants.push_back(omrc::parse_variant(m));
  const auto config = omrc::load_config(inv.config, inv.overrides);
  auto synthesis = omrc::synthesize(config);
  omrc::resolve_partition(config, synthesis);
  const auto runs = omrc::run_variants(config, synthesis.candidates.principal_gains(), synthesis.augmented,
                                       variants, parallel);
  std::vector<omrc::LabeledReport> reports;
  for (const auto& r : runs) reports.push_back({r.label, r.metrics});
  const auto cmp = omrc::compare_runs(reports);
  std::cout << cmp.text;
  const auto dir = output_root();
  std::filesystem::create_directories(dir);
  write_json(dir / "compare.json", cmp.json);
  return 0;
}

int cmd_repro(const Invocation& inv, bool parallel) {
  const auto config = omrc::load_config(inv.config, inv.overrides);
  const auto out = omrc::run_repro(config, parallel);
  const auto dir = output_root() / ("repro_" + timestamp());
  std::filesystem::create_directories(dir);
  for (const auto& run : out.runs) {
    omrc::export_csv(run.trace, dir / (run.label + ".csv"));
    nlohmann::json report = omrc::to_json(run.metrics);
    report["label"] = run.label;
    report["runtime_seconds"] = run.seconds;
    write_json(dir / (run.label + ".json"), report);
  }
  const std::string table = omrc::format_gates(out.gates);
  nlohmann::json summary;
  summary["gains"] = gains_json(out.synthesis.candidates.principal_gains());
  summary["comparison"] = out.comparison.json;
  summary["gates"] = nlohmann::json::array();
  for (const auto& g : out.gates) {
    summary["gates"].push_back({{"name", g.name}, {"hard", g.hard}, {"passed", g.passed}, {"detail", g.detail}});
  }
  summary["hard_gates_pass"] = out.hard_gates_pass();
  write_json(dir / "summary.json", summary);
  std::ofstream(dir / "summary.txt") << out.comparison.text << '\n' << table;
  std::cout << out.comparison.text << '\n' << table << "artifacts in " << dir.string() << '\n';
  return out.hard_gates_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-triggered repetitive control toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> args;
  std::vector<std::string> modes;
  std::string name = "run";
  bool parallel = false;

  auto* synth = app.add_subcommand("synth", "Solve the Riccati equation and print both gain partitions");
  synth->add_option("args", args, "config path or bundled name, then key=value overrides");
  auto* run = app.add_subcommand("run", "Simulate one scenario and write CSV + JSON");
  run->add_option("args", args, "config path or bundled name, then key=value overrides");
  run->add_option("--name", name, "base name of the output files");
  auto* compare = app.add_subcommand("compare", "Run several variants and compare their metrics");
  compare->add_option("args", args, "config path or bundled name, then key=value overrides");
  compare->add_option("--modes", modes, "eid_on eid_off adaptive static continuous step_disturbance")
      ->delimiter(',')
      ->required();
  compare->add_flag("--parallel", parallel, "run variants concurrently");
  auto* repro = app.add_subcommand("repro", "Run the full reproduction suite");
  repro->add_option("args", args, "config path or bundled name, then key=value overrides");
  repro->add_flag("--parallel", parallel, "run variants concurrently");

  CLI11_PARSE(app, argc, argv);
  Invocation inv;
  inv.absorb(args);
  try {
    if (*synth) return cmd_synth(inv);
    if (*run) return cmd_run(inv, name);
    if (*compare) return cmd_compare(inv, modes, parallel);
    if (*repro) return cmd_repro(inv, parallel);
  } catch (const omrc::Error& e) {
    std::cerr << "error [" << omrc::to_string(e.kind()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
