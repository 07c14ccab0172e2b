#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "subsize/runner.hpp"

using namespace subsize;

namespace {

struct Common
{
  std::string config;
  std::string out;
  bool json_output = false;
  std::optional<std::size_t> window;
  std::optional<std::uint64_t> seed;

  Overrides overrides() const { return {window, seed}; }
};

void add_common(CLI::App *cmd, Common &c, bool config_required)
{
  auto *opt = cmd->add_option("--config", c.config, "JSON run configuration");
  if (config_required)
    opt->required();
  cmd->add_option("--window", c.window, "override the default window size");
  cmd->add_option("--seed", c.seed, "override the config seed");
  cmd->add_option("--out", c.out, "write the JSON report here");
  cmd->add_flag("--json", c.json_output, "print the JSON report instead of the summary");
}

int emit(const RunResult &r, const Common &c)
{
  if (!c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) {
      std::cerr << "cannot write " << c.out << "\n";
      return kExitConfig;
    }
    f << r.report.dump(2) << "\n";
  }
  if (c.json_output)
    std::cout << r.report.dump(2) << "\n";
  else
    (r.exit_code == kExitConfig ? std::cerr : std::cout) << r.summary;
  return r.exit_code;
}

json load_or_report(const std::string &path, RunResult &err)
{
  try {
    return read_json_file(path);
  } catch (const spec_error &e) {
    err = detail::config_error(e.what());
    return nullptr;
  }
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"subsize: subset-size checkers, constructions and reports for groups"};
  app.require_subcommand(1);

  Common check_opts, construct_opts, verify_opts, ramsey_opts;
  auto *check = app.add_subcommand("check", "run the checks listed in a config");
  add_common(check, check_opts, true);
  auto *construct = app.add_subcommand("construct", "build the witness named by a config's \"construct\" entry");
  add_common(construct, construct_opts, true);
  auto *verify = app.add_subcommand("verify", "re-verify a witness file, optionally running config checks on it");
  std::string witness_path;
  verify->add_option("witness", witness_path, "witness JSON file")->required();
  add_common(verify, verify_opts, false);
  auto *oracle = app.add_subcommand("oracle-ramsey", "least bipartite Ramsey number by exhaustive search");
  std::size_t n = 2, r_max = 5;
  oracle->add_option("--n", n, "side of the monochromatic sub-grid")->capture_default_str();
  oracle->add_option("--r-max", r_max, "largest grid searched")->capture_default_str();
  add_common(oracle, ramsey_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  RunResult err;
  if (check->parsed()) {
    auto cfg = load_or_report(check_opts.config, err);
    return emit(cfg.is_null() ? err : run_config(cfg, check_opts.overrides()), check_opts);
  }
  if (construct->parsed()) {
    auto cfg = load_or_report(construct_opts.config, err);
    return emit(cfg.is_null() ? err : construct_from_config(cfg, construct_opts.overrides()), construct_opts);
  }
  if (verify->parsed()) {
    auto file = load_or_report(witness_path, err);
    if (file.is_null())
      return emit(err, verify_opts);
    json cfg = json::object();
    if (!verify_opts.config.empty()) {
      cfg = load_or_report(verify_opts.config, err);
      if (cfg.is_null())
        return emit(err, verify_opts);
    }
    return emit(verify_witness(file, cfg, verify_opts.overrides()), verify_opts);
  }
  RunResult r;
  try {
    auto rep = bipartite_ramsey(n, r_max, ramsey_opts.seed.value_or(0));
    r.report = {{"schema", kReportSchema}, {"timestamp", utc_timestamp()}, {"results", json::array({to_json(rep)})}};
    r.summary = "bipartite_ramsey(" + std::to_string(n) + "): " +
                (rep.holds() ? "r = " + rep.certificate["r"].dump() : std::string("exhausted up to r_max")) +
                ", extremal " + rep.certificate["extremal"]["size"].dump() + "x" +
                rep.certificate["extremal"]["size"].dump() + " coloring\n";
  } catch (const spec_error &e) {
    r = detail::config_error(e.what());
  }
  return emit(r, ramsey_opts);
}
