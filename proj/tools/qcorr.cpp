// Copyright 2026 The qcorr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qcorr/qcorr.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitNumerical = 3;

unsigned env_threads() {
  const char* v = std::getenv("QCORR_THREADS");
  if (!v || !*v) return 1;
  try {
    const long n = std::stol(v);
    return n < 0 ? 1u : static_cast<unsigned>(n);
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring QCORR_THREADS='" << v << "'\n";
    return 1;
  }
}

int report_failure(const std::exception& e) {
  if (const auto* s = dynamic_cast<const qcorr::SweepFailure*>(&e)) {
    std::cerr << "error: " << s->what() << '\n';
    if (s->invalid_input()) return kExitBadConfig;
    std::cerr << "numerical failure at grid time " << s->time() << '\n';
    return kExitNumerical;
  }
  if (dynamic_cast<const qcorr::InvalidArgument*>(&e)) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }
  std::cerr << "error: " << e.what() << '\n';
  return kExitNumerical;
}

int cmd_sweep(const std::string& path, const std::string& out_override) {
  qcorr::RunConfig rc;
  try {
    rc = qcorr::load_run_config(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }
  rc.sweep.threads = env_threads();
  const std::filesystem::path out = out_override.empty() ? rc.output_dir : out_override;
  try {
    const qcorr::RunResult r = qcorr::run(rc);
    qcorr::write_outputs(out, rc, r);
    std::cout << "wrote " << (out / "trajectory.csv").string() << ", crossings.json, verdict.json ("
              << r.verdict.classification << ")\n";
  } catch (const std::exception& e) {
    return report_failure(e);
  }
  return kExitOk;
}

int cmd_validate(const std::string& steering, bool literal_pd) {
  qcorr::ValidationOptions opt;
  opt.threads = env_threads();
  opt.literal_pd_sqrt = literal_pd;
  opt.steering = steering == "eigenvalues" ? qcorr::SteeringMode::Eigenvalues : qcorr::SteeringMode::SingularValues;
  const auto rep = qcorr::run_validation(opt);
  qcorr::print_validation(std::cout, rep);
  return rep.passed() ? kExitOk : kExitFailed;
}

int cmd_table1(const std::string& out_dir) {
  auto rows = qcorr::scenario_rows();
  for (auto& row : rows) row.config.sweep.threads = env_threads();
  std::vector<qcorr::RunResult> results;
  const auto outcomes = qcorr::run_scenarios(rows, &results);
  qcorr::print_scenarios(std::cout, outcomes);

  int code = kExitOk;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!outcomes[i].error.empty()) {
      code = std::max(code, kExitNumerical);
      continue;
    }
    if (!out_dir.empty()) {
      try {
        qcorr::write_outputs(std::filesystem::path(out_dir) / rows[i].id, rows[i].config, results[i]);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadConfig;
      }
    }
    if (!outcomes[i].matches() || !outcomes[i].chains_ok()) code = std::max(code, kExitFailed);
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcorr: two-qubit correlation hierarchy under noisy channels"};
  app.require_subcommand(1);

  std::string config_path, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Run one configured sweep and write CSV/JSON outputs");
  sweep->add_option("config", config_path, "JSON run configuration")->required();
  sweep->add_option("--out", sweep_out, "Output directory (overrides output_dir in the config)");

  std::string steering = "singular_values";
  bool literal_pd = false;
  auto* validate = app.add_subcommand("validate", "Run the invariant suite");
  validate->add_option("--steering-eigen-mode", steering, "Steering coefficients from singular values or eigenvalues")
      ->check(CLI::IsMember({"singular_values", "eigenvalues"}));
  validate->add_flag("--debug-literal-pd-kraus", literal_pd,
                     "Use sqrt(p) in the first phase damping operator (breaks completeness on purpose)");

  std::string table_out;
  auto* table1 = app.add_subcommand("table1", "Classify every scenario row as decay or both");
  table1->add_option("--out", table_out, "Also write each row's outputs under this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadConfig;
  }

  if (*sweep) return cmd_sweep(config_path, sweep_out);
  if (*validate) return cmd_validate(steering, literal_pd);
  if (*table1) return cmd_table1(table_out);
  return kExitFailed;
}
