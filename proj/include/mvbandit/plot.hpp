#pragma once

// Minimal SVG renderer for aggregate regret curves: one line per policy on a
// log-t axis with a shaded standard-error band. No external tooling; the
// output is a self-contained SVG file.

#include <string>

namespace mvbandit {

// Reads an aggregate CSV (policy,scenario,t,mean_regret,stderr,n_seeds) and
// writes an SVG. Throws ConfigError naming the offending row on malformed
// input. An empty title falls back to the scenario column.
void plot_regret_csv(const std::string& csv_path, const std::string& svg_path,
                     const std::string& title = {});

}  // namespace mvbandit
