#pragma once

#include "spm/solver.hpp"

namespace spm {

// Brute-force reference solver for tiny instances (num_vars <= 8, rows <= 24).
//
// Every square subsystem of constraint rows is solved for a candidate vertex
// and the best feasible one wins; unboundedness is decided by testing the
// basic directions of the recession cone (null vectors of (d-1)-row
// subsystems) plus a {-1,0,1}^d sign grid against G r <= 0, c'r > 0.
// Degenerate-singular subsystems are skipped. The result carries no dual
// certificate; its authority is the enumeration itself.
//
// Throws std::invalid_argument when the instance exceeds the enumeration cap.
LpSolution solve_exhaustive(const LpProblem& problem);

}  // namespace spm
