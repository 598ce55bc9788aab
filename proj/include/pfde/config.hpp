#pragma once

#include <string>

#include "pfde/problem.hpp"

namespace pfde {

// Parses the structured-text problem configuration:
//
//   problem  { n, length, mesh_points, delay_steps }
//   species[i] { diffusion, bc = dirichlet|neumann|robin,
//                robin_alpha_left, robin_alpha_right }
//   reaction { catalog, <coefficient tables> }
//   driver   { frequencies = [...], angles = [...] }
//
// Coefficient tables are bracketed term rows "[amp phase m_1..m_k p0..p4; ...]"
// (poly tail may be shortened; missing degrees are zero). Unknown keys are an
// error. Throws ConfigError with the offending key in the message.
ProblemSpec parse_problem_config(const std::string& text);

ProblemSpec load_problem_config(const std::string& path);

}  // namespace pfde
