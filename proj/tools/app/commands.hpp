#pragma once

#include <ostream>

#include "run_spec.hpp"

namespace tzone::app {

// Each command writes its files under spec.out_dir, prints a short report
// to `out` and returns the process exit status.

/// U and v* surfaces of the closed form: value.csv, value_U.svg, value_vstar.svg.
int cmd_value(const RunSpec& spec, std::ostream& out);
/// Speed table of the first selected strategy: strategy.csv, strategy.svg.
int cmd_strategy(const RunSpec& spec, std::ostream& out);
/// Monte Carlo objective of the first selected strategy: simulate.json, paths.csv.
int cmd_simulate(const RunSpec& spec, std::ostream& out);
/// U^eps by Feynman-Kac Monte Carlo at (t_eval, z_list): ueps.csv.
int cmd_ueps(const RunSpec& spec, std::ostream& out);
/// PDE solve (singular, hjb-eps or hopf-cole): pde.csv, pde.svg, pde_compare.csv.
int cmd_pde(const RunSpec& spec, std::ostream& out);
/// eps -> 0 sweep against the closed form: converge.csv, converge_sup.csv.
int cmd_converge(const RunSpec& spec, std::ostream& out);
/// Ranks strategies by Monte Carlo payoff on common random numbers: compare.csv.
int cmd_compare(const RunSpec& spec, std::ostream& out);
/// Acceptance suite: accept.json. Nonzero exit iff a criterion failed.
int cmd_accept(const RunSpec& spec, std::ostream& out);

int dispatch(const RunSpec& spec, std::ostream& out);

}  // namespace tzone::app
