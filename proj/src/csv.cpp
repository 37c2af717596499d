#include "sedsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sedsim {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}
}  // namespace

void write_state_csv(const std::string& path, const Grid& grid, const FlowState& flow,
                     const BedField& bed) {
    std::ofstream os = open_out(path);
    if (grid.dim == 1) {
        os << "x,h,u,B\n";
        for (int i = 0; i < grid.nx; ++i)
            os << format_g17(grid.x(i)) << ',' << format_g17(flow.h[i]) << ','
               << format_g17(flow.u[i]) << ',' << format_g17(bed.B[i]) << '\n';
    } else {
        os << "x,y,h,u,v,B\n";
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                int c = grid.idx(i, j);
                os << format_g17(grid.x(i)) << ',' << format_g17(grid.y(j)) << ','
                   << format_g17(flow.h[c]) << ',' << format_g17(flow.u[c]) << ','
                   << format_g17(flow.v[c]) << ',' << format_g17(bed.B[c]) << '\n';
            }
    }
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream os = open_out(path);
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_g17(row[c]);
        os << '\n';
    }
}

}  // namespace sedsim
