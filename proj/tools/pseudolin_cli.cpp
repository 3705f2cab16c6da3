// pseudolin: command-line front end.
//
//   pseudolin order --curve "0 0 1 -1 0" --x 5
//   pseudolin construct --curve "0 0 1 -1 0" --gamma trivial --x 5
//   pseudolin bounds --basis data/389a_basis.txt --gamma data/389a_gamma.txt --grid 50:200:50

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "pseudolin/cli.hpp"

namespace cli = pseudolin::cli;

int main(int argc, char** argv) {
  CLI::App app{"Pseudolinearly dependent points on elliptic curves over Q"};
  app.require_subcommand(1);
  cli::JobConfig cfg;
  std::string out;

  struct CommandInfo {
    const char* name;
    const char* help;
  };
  const CommandInfo commands[] = {
      {"order", "N_p (and T_p with --gamma) for good p <= x"},
      {"structure", "group structure of E(F_p) for good p <= x, or at --p"},
      {"construct", "R_min, L_x and the certified height of Q_min"},
      {"verify", "per-prime pseudolinear dependence report for Q_min or --point"},
      {"witness", "smallest good prime p <= pmax with Q mod p outside Gamma_p"},
      {"bounds", "bound comparison report over --grid"},
      {"scan", "construct and verify over --grid"},
  };
  for (const auto& info : commands) {
    CLI::App* sub = app.add_subcommand(info.name, info.help);
    sub->add_option("--curve", cfg.curve, "curve line \"a1 a2 a3 a4 a6\"");
    sub->add_option("--gamma", cfg.gamma, "subgroup file, or 'trivial'");
    sub->add_option("--basis", cfg.basis, "basis file of free generators of E(Q)");
    sub->add_option("--x", cfg.x, "prime cutoff x");
    sub->add_option("--grid", cfg.grid, "x grid a:b:step");
    sub->add_option("--eps", cfg.eps, "height interval width")->capture_default_str();
    sub->add_option("--coeff-bound", cfg.coeff_bound, "coefficient box for R_min")->capture_default_str();
    sub->add_option("--search-bound", cfg.search_bound, "Weil height box (exp) when no basis is given")
        ->capture_default_str();
    sub->add_option("--pmax", cfg.pmax, "largest prime for the witness search")->capture_default_str();
    sub->add_option("--point", cfg.point, "point x,y");
    sub->add_option("--p", cfg.p, "single prime");
    sub->add_option("--out", out, "write output to FILE");
    sub->add_option("--format", cfg.format, "csv or text");
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitParse;
  }

  const cli::RunResult r = cli::run(cfg);
  if (r.status != cli::kExitOk) {
    std::cerr << "error: " << r.error << '\n';
    return r.status;
  }
  if (out.empty()) {
    std::cout << r.output;
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "error: cannot write " << out << '\n';
      return cli::kExitDomain;
    }
    f << r.output;
  }
  return cli::kExitOk;
}
