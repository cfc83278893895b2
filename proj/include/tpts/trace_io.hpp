#pragma once

#include <string>

#include "tpts/analysis.hpp"
#include "tpts/simulator.hpp"

namespace tpts {

// Fixed column order, full double precision (17 significant digits); output is
// byte-identical across runs with the same configuration.
inline constexpr const char* kTraceHeader =
    "t,v_grid_a,v_grid_b,v_grid_c,i_ref_a,i_ref_b,i_ref_c,gate_a,gate_b,gate_c,"
    "i_rect_a,i_rect_b,i_rect_c,i_src_a,i_src_b,i_src_c,i_dc,v_out";

std::string trace_to_csv(const Trace& trace);
void write_file(const std::string& path, const std::string& content);

}  // namespace tpts
