#ifndef DPATH_MAPPERS_HPP
#define DPATH_MAPPERS_HPP

#include "dpath/edp.hpp"
#include "dpath/gridtiling.hpp"
#include "dpath/reduction.hpp"

namespace dpath {

// Row_l(G_{i,j}^split): w_{LB}^{1,l} ~> w_{TR}^{N,l}, crossing the dotted edge
// of every split vertex on row l. Column_l is the bottom-to-top analogue on
// column l. Throws std::out_of_range for l outside [N] or (i,j) outside [k]^2.
Path row_path(const EmbeddedDigraph& g2, int i, int j, int l);
Path column_path(const EmbeddedDigraph& g2, int i, int j, int l);

// Builds R_1..R_k (a_i to b_i up the columns alpha_{i,j}) and T_1..T_k (c_j to
// d_j along the rows beta_{i,j}), joined through the blue connector runs.
// On a degree-reduced graph the terminal hops follow the tree. Throws
// InvalidSolution unless asg solves out.provenance.
PathSet gt_solution_to_paths(const ReductionOutput& out, const GTAssignment& asg);

// For each cell, the first whole vertex of grid (i,j) on P_i that Q_j also
// visits gives (mu_{i,j}, delta_{i,j}). Throws ExtractionFailed when some cell
// has none and InvalidSolution when ps is not an EDP solution.
GTAssignment paths_to_gt_solution(const ReductionOutput& out, const PathSet& ps);

// Every edge of P_i inside Vertical(i) and every edge of Q_j inside Horizontal(j).
bool check_level_confinement(const ReductionOutput& out, const PathSet& ps);

} // namespace dpath

#endif
