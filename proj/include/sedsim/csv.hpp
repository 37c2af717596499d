#pragma once

#include <string>
#include <vector>

#include "sedsim/types.hpp"

namespace sedsim {

/// All floats are printed with 17 significant digits.
std::string format_g17(double v);

/// 1D: columns x,h,u,B; 2D: x,y,h,u,v,B (row-major cells).
void write_state_csv(const std::string& path, const Grid& grid, const FlowState& flow,
                     const BedField& bed);

/// Generic table writer (header row + rows of g17-formatted values).
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

}  // namespace sedsim
