#pragma once

#include <string>
#include <vector>

#include "humplab/types.hpp"

namespace humplab {

/// Trace CSV: header row, then one row per sample, 17 significant
/// digits so values survive a round trip exactly. Full header is
/// t,norm,energy,m2,s,p_O,p_P,w_mode; traces without pair projections
/// stop after m2.
void write_trace_csv(const TimeTrace& trace, const std::string& path);

/// Column-oriented view of any numeric CSV with a header row.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // one vector per column

    std::size_t rows() const { return data.empty() ? 0 : data[0].size(); }
    const std::vector<double>* find(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

/// read_csv plus schema validation for the trace layout above.
TimeTrace read_trace_csv(const std::string& path);

} // namespace humplab
