// Command-line driver: argument parsing only; the command bodies and the
// exit-code policy live in the library (thinorbit/commands.hpp).

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "thinorbit/commands.hpp"
#include "thinorbit/config.hpp"

namespace {

// Flags shared by the data-producing subcommands.  Optionals record whether
// the flag was passed so config-file values survive when it was not.
struct CommonFlags {
  std::string config_path;
  std::string fixture;
  std::string out;
  std::optional<double> T, N, Q0, K0, eps0, eps1;
  std::optional<int> threads;
  bool oracle = false;
  bool free_tree = false;
  CLI::Option* oracle_opt = nullptr;
  CLI::Option* free_tree_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path,
                  "Run configuration file (key = value lines)");
  cmd->add_option("--fixture", f.fixture, "Registered fixture name");
  cmd->add_option("--T", f.T, "Ball radius (matrix norm bound)");
  cmd->add_option("--N", f.N, "Target window size");
  cmd->add_option("--Q0", f.Q0, "Major-arc denominator cutoff");
  cmd->add_option("--K0", f.K0, "Major-arc width scale");
  cmd->add_option("--eps0", f.eps0, "Rational-approximation depth margin");
  cmd->add_option("--eps1", f.eps1, "Feasibility slack");
  cmd->add_option("--out", f.out, "Output file (stdout when omitted)");
  cmd->add_option("--threads", f.threads, "Worker threads for the ball search");
  f.oracle_opt =
      cmd->add_flag("--oracle", f.oracle, "Use the brute-force reference path");
  f.free_tree_opt = cmd->add_flag(
      "--free-tree", f.free_tree,
      "Memory-light ball search (exact when the generators freely generate)");
}

thinorbit::RunConfig materialize(const CommonFlags& f) {
  thinorbit::RunConfig cfg;
  if (!f.config_path.empty()) cfg = thinorbit::load_config(f.config_path);
  if (!f.fixture.empty()) cfg.fixture = f.fixture;
  if (f.T) cfg.T = *f.T;
  if (f.N) cfg.N = *f.N;
  if (f.Q0) cfg.Q0 = *f.Q0;
  if (f.K0) cfg.K0 = *f.K0;
  if (f.eps0) cfg.eps0 = *f.eps0;
  if (f.eps1) cfg.eps1 = *f.eps1;
  if (f.threads) cfg.threads = *f.threads;
  if (f.oracle_opt && f.oracle_opt->count() > 0) cfg.oracle = f.oracle;
  if (f.free_tree_opt && f.free_tree_opt->count() > 0)
    cfg.free_tree = f.free_tree;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Orbit linear-form toolkit: norm-ball enumeration, congruence "
      "obstructions, and circle-method diagnostics for finitely generated "
      "subgroups of SL(2,Z)"};
  app.require_subcommand(1);

  CommonFlags ball_f;
  CLI::App* ball = app.add_subcommand(
      "ball", "Enumerate the norm ball and its linear forms as CSV");
  add_common(ball, ball_f);

  CommonFlags exc_f;
  CLI::App* exc = app.add_subcommand(
      "exceptional",
      "List admissible integers in [-N, N] missed by the represented set");
  add_common(exc, exc_f);

  CommonFlags circ_f;
  bool minor_arcs = false;
  std::string asum;
  CLI::App* circ = app.add_subcommand(
      "circle",
      "Representation counts, main terms, and errors over n in [N/2, N]");
  add_common(circ, circ_f);
  CLI::Option* ma_opt = circ->add_flag(
      "--minor-arcs", minor_arcs,
      "Also write the minor-arc profile (<out>.dyadic.csv)");
  circ->add_option("--asum", asum, "Series a-sum range: full | coprime")
      ->check(CLI::IsMember({"full", "coprime"}));

  std::string p_delta = "1";
  std::string p_eps0 = "1/100";
  std::string p_eps1 = "1/1000";
  std::string p_texp = "1/3";
  std::string p_out;
  double p_N = 1e12;
  CLI::App* par = app.add_subcommand(
      "params",
      "Derive run parameters from exact rational inputs and check "
      "feasibility");
  par->add_option("delta", p_delta,
                  "Spectral-gap quality in (5/6, 1], exact rational");
  par->add_option("--N", p_N, "Target window size");
  par->add_option("--eps0", p_eps0,
                  "Rational-approximation depth margin, exact rational");
  par->add_option("--eps1", p_eps1, "Feasibility slack, exact rational");
  par->add_option("--T-exponent", p_texp,
                  "T = N^exponent, exact rational in (0, 1/2)");
  par->add_option("--out", p_out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends: exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (ball->parsed())
    return thinorbit::run_command(
        [&] { thinorbit::cmd_ball(materialize(ball_f), ball_f.out); });
  if (exc->parsed())
    return thinorbit::run_command(
        [&] { thinorbit::cmd_exceptional(materialize(exc_f), exc_f.out); });
  if (circ->parsed())
    return thinorbit::run_command([&] {
      thinorbit::RunConfig cfg = materialize(circ_f);
      if (ma_opt->count() > 0) cfg.minor_arcs = minor_arcs;
      if (!asum.empty()) cfg.asum = asum;
      thinorbit::cmd_circle(cfg, circ_f.out);
    });
  if (par->parsed())
    return thinorbit::run_command([&] {
      thinorbit::cmd_params(p_delta, p_N, p_eps0, p_eps1, p_texp, p_out);
    });
  return 1;
}
