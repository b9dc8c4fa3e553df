#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "xirho/measures.hpp"
#include "xirho/oracle.hpp"
#include "xirho/rearrange.hpp"
#include "xirho/region.hpp"

namespace xirho {

/// 12 significant digits, shortest form ("0.3", "1e-05").
std::string format_number(double value);

// CSV writers use ',' separators and '\n' line endings.

/// Columns x,M_x,b_x; b_x is left blank where undefined.
void write_boundary_csv(std::ostream& out, const std::vector<BoundaryRow>& rows);

/// First line holds the v levels, then one line of n_t values per level.
void write_grid_csv(std::ostream& out, const GridH& grid);
GridH read_grid_csv(std::istream& in);

/// Header x,y then one pair per line.
void write_sample_csv(std::ostream& out, const Sample& sample);
/// Two numeric columns; a non-numeric first line is treated as a header.
Sample read_sample_csv(std::istream& in);

/// Columns v,plateau_end,root,slope.
void write_oracle_rows_csv(std::ostream& out, const std::vector<OracleRow>& rows);

/// Opens a file for writing or throws IoError.
std::ofstream open_output(const std::string& path);
std::ifstream open_input(const std::string& path);

}  // namespace xirho
