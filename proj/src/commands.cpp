#include "thinorbit/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "thinorbit/circle.hpp"
#include "thinorbit/congruence.hpp"
#include "thinorbit/repr.hpp"

namespace thinorbit {

namespace {

std::string fmt_f64(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + out_path);
  out << content;
}

// Cheap non-elementarity probe: pairwise-commuting generators produce an
// abelian (hence virtually cyclic) group, which has no two independent
// linear forms to work with.
void require_nonelementary(const GroupSpec& g) {
  for (std::size_t i = 0; i < g.generators.size(); ++i)
    for (std::size_t j = i + 1; j < g.generators.size(); ++j)
      if (!(mat_mul(g.generators[i], g.generators[j]) ==
            mat_mul(g.generators[j], g.generators[i])))
        return;
  throw config_error(
      "the generators pairwise commute, so the group is elementary and the "
      "represented set degenerates to finitely many progressions");
}

std::string group_metadata(const GroupSpec& g) {
  std::string out = "# generators=";
  for (std::size_t i = 0; i < g.generators.size(); ++i) {
    if (i) out += ";";
    out += mat_to_string(g.generators[i]);
  }
  out += "\n# J=" + std::to_string(g.J) + " v=" + std::to_string(g.v[0]) +
         "," + std::to_string(g.v[1]) + " w=" + std::to_string(g.w[0]) + "," +
         std::to_string(g.w[1]) + "\n";
  return out;
}

}  // namespace

void cmd_ball(const RunConfig& cfg, const std::string& out_path) {
  GroupSpec g = cfg.group();
  if (!cfg.T) throw config_error("ball needs --T (or a config with T set)");
  double T = *cfg.T;
  if (!(T > 0)) throw config_error("--T must be positive");
  std::vector<Mat2> elements;
  if (cfg.oracle) {
    elements = word_ball(g, T, g.prune_factor);
  } else {
    elements = enumerate_ball(g, T, cfg.ball_options()).elements;
  }
  std::string csv = "a,b,c,d,norm_sq,A,B\n";
  for (const Mat2& m : elements) {
    csv += mat_to_string(m) + "," + std::to_string(norm_sq(m)) + "," +
           std::to_string(form_step(g, m)) + "," +
           std::to_string(form_offset(g, m)) + "\n";
  }
  csv += "count," + std::to_string(elements.size()) + "\n";
  write_output(out_path, csv);
}

void cmd_exceptional(const RunConfig& cfg, const std::string& out_path) {
  GroupSpec g = cfg.group();
  require_nonelementary(g);
  std::int64_t N = (std::int64_t)std::llround(cfg.N);
  if (N < 1) throw config_error("exceptional needs N >= 1");
  double T = cfg.resolved_T();
  ObstructionReport report =
      discover_Z(g, cfg.prime_bound, cfg.power_bound, cfg.quotient_cap);
  RepWindow window = represent_set(g, N, T, cfg.ball_options());
  std::vector<std::int64_t> exceptional =
      exceptional_from_window(report, window);
  write_output(out_path, exceptional_csv(g, report, window, exceptional));
}

void cmd_circle(const RunConfig& cfg, const std::string& out_path) {
  GroupSpec g = cfg.group();
  CircleParams p = cfg.params();
  Ensemble ens = make_ensemble(g, p, cfg.ball_options());
  SingularSeries::ASum mode = cfg.asum == "coprime"
                                  ? SingularSeries::ASum::coprime_only
                                  : SingularSeries::ASum::full_range;
  SingularSeries series(g, (std::int64_t)p.Q0, mode, cfg.quotient_cap);
  ObstructionReport report =
      discover_Z(g, cfg.prime_bound, cfg.power_bound, cfg.quotient_cap);

  std::int64_t n_lo = (std::int64_t)std::ceil(p.N / 2);
  std::int64_t n_hi = (std::int64_t)std::floor(p.N);
  std::vector<double> R = representation_sweep(ens, n_lo, n_hi);

  std::string csv = group_metadata(g);
  csv += "# N=" + fmt_f64(p.N) + " T=" + fmt_f64(p.T) + " X=" + fmt_f64(p.X) +
         " M=" + fmt_f64(p.M) + " Q0=" + fmt_f64(p.Q0) +
         " K0=" + fmt_f64(p.K0) + "\n";
  csv += "# asum=" + cfg.asum + " Z=" + std::to_string(report.Z) + "\n";
  csv += "n,R_N,M_N,E_N,admissible\n";
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    double r = R[(std::size_t)(n - n_lo)];
    double m = main_term(ens, series, n);
    csv += std::to_string(n) + "," + fmt_f64(r) + "," + fmt_f64(m) + "," +
           fmt_f64(r - m) + "," + (is_admissible(report, n) ? "1" : "0") +
           "\n";
  }
  write_output(out_path, csv);

  if (cfg.minor_arcs) {
    MinorArcProfile prof = minor_arc_profile(ens);
    std::string dy = "# I1=" + fmt_f64(prof.I1) + " I2=" + fmt_f64(prof.I2) +
                     " I3=" + fmt_f64(prof.I3) + " I4=" + fmt_f64(prof.I4) +
                     " est_error=" + fmt_f64(prof.est_error) + "\n";
    dy += "q,I_Q\n";
    for (const auto& [Q, value] : prof.dyadic)
      dy += std::to_string(Q) + "," + fmt_f64(value) + "\n";
    write_output(out_path.empty() ? "" : out_path + ".dyadic.csv", dy);
  }
}

void cmd_params(const std::string& delta, double N, const std::string& eps0,
                const std::string& eps1, const std::string& T_exponent,
                const std::string& out_path) {
  Rational d = Rational::parse(delta);
  Rational e0 = Rational::parse(eps0);
  Rational e1 = Rational::parse(eps1);
  Rational texp = Rational::parse(T_exponent);
  CircleParams p = choose_parameters(N, d, e0, e1, texp);

  std::string out;
  out += "delta = " + d.str() + "\n";
  out += "eps0 = " + e0.str() + "\n";
  out += "eps1 = " + e1.str() + "\n";
  out += "T_exponent = " + texp.str() + "\n";
  out += "K0_exponent = " + k0_exponent().eval(d).str() + "\n";
  out += "Q0_exponent = " + q0_exponent(e1).eval(d).str() + "\n";
  out += "boundary_delta = " + feasibility_boundary_delta().str() + "\n";
  for (const ConstraintCheck& c : check_constraints(d, e1)) {
    out += "constraint " + c.name + ": " + c.lhs.str() + " " + c.relation +
           " " + c.rhs.str() + " : " + (c.ok ? "ok" : "violated") + "\n";
  }
  out += "N = " + fmt_f64(p.N) + "\n";
  out += "T = " + fmt_f64(p.T) + "\n";
  out += "X = " + fmt_f64(p.X) + "\n";
  out += "M = " + fmt_f64(p.M) + "\n";
  out += "Q0 = " + fmt_f64(p.Q0) + "\n";
  out += "K0 = " + fmt_f64(p.K0) + "\n";
  write_output(out_path, out);
}

int run_command(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const infeasible_error& e) {
    std::cerr << "infeasible: " << e.constraint << ": " << e.what() << "\n";
    return 2;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const overflow_error& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return 3;
  } catch (const capacity_error& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return 4;
  } catch (const numeric_error& e) {
    std::cerr << "accuracy: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace thinorbit
