#pragma once

#include <string>
#include <vector>

#include "mgrid/parameters.hpp"
#include "mgrid/trace_io.hpp"

namespace mgrid {

// Writes voltage.svg, current.svg and duty.svg into out_dir: one curve per
// node, legends by node index, and per-node bound guide lines on the voltage
// and current charts. Throws ConfigError on an empty trace.
void emit_plots(const TraceTable& table, const GridParameters& params,
                const std::string& out_dir);

}  // namespace mgrid
