#include "humplab/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "humplab/errors.hpp"

namespace humplab {

namespace {

void append_value(std::string& line, double x) {
    char buf[40];
    if (!std::isfinite(x))
        throw ArgumentError("refusing to serialize a non-finite value");
    std::snprintf(buf, sizeof buf, "%.17g", x);
    line += buf;
}

} // namespace

void write_trace_csv(const TimeTrace& trace, const std::string& path) {
    const std::size_t n = trace.rows();
    if (trace.norm.size() != n || trace.energy.size() != n || trace.m2.size() != n)
        throw ArgumentError("trace columns have inconsistent lengths");
    if (trace.has_pair &&
        (trace.s.size() != n || trace.p_O.size() != n ||
         trace.p_P.size() != n || trace.w_mode.size() != n))
        throw ArgumentError("trace pair columns have inconsistent lengths");

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path + " for writing");

    out << (trace.has_pair ? "t,norm,energy,m2,s,p_O,p_P,w_mode\n"
                           : "t,norm,energy,m2\n");
    std::string line;
    for (std::size_t k = 0; k < n; ++k) {
        line.clear();
        append_value(line, trace.times[k]);
        line += ',';
        append_value(line, trace.norm[k]);
        line += ',';
        append_value(line, trace.energy[k]);
        line += ',';
        append_value(line, trace.m2[k]);
        if (trace.has_pair) {
            line += ',';
            append_value(line, trace.s[k]);
            line += ',';
            append_value(line, trace.p_O[k]);
            line += ',';
            append_value(line, trace.p_P[k]);
            line += ',';
            append_value(line, trace.w_mode[k]);
        }
        line += '\n';
        out << line;
    }
    if (!out.flush())
        throw IoError("short write to " + path);
}

const std::vector<double>* CsvTable::find(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return &data[i];
    return nullptr;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);

    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw IoError(path + ": empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    std::stringstream header(line);
    std::string name;
    while (std::getline(header, name, ','))
        table.columns.push_back(name);
    if (table.columns.empty())
        throw IoError(path + ": no columns in header");
    table.data.resize(table.columns.size());

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const char* p = line.c_str();
        for (std::size_t col = 0; col < table.columns.size(); ++col) {
            char* end = nullptr;
            double v = std::strtod(p, &end);
            if (end == p)
                throw IoError(path + ": bad number in row " + std::to_string(row));
            table.data[col].push_back(v);
            p = end;
            if (col + 1 < table.columns.size()) {
                if (*p != ',')
                    throw IoError(path + ": expected comma in row " + std::to_string(row));
                ++p;
            }
        }
        if (*p != '\0')
            throw IoError(path + ": trailing data in row " + std::to_string(row));
    }
    return table;
}

TimeTrace read_trace_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    const std::vector<std::string> base = {"t", "norm", "energy", "m2"};
    const std::vector<std::string> full = {"t",   "norm", "energy", "m2",
                                           "s",   "p_O",  "p_P",    "w_mode"};
    bool has_pair;
    if (t.columns == full)
        has_pair = true;
    else if (t.columns == base)
        has_pair = false;
    else
        throw IoError(path + ": not a trace file (unexpected columns)");

    TimeTrace trace;
    trace.has_pair = has_pair;
    trace.times = t.data[0];
    trace.norm = t.data[1];
    trace.energy = t.data[2];
    trace.m2 = t.data[3];
    if (has_pair) {
        trace.s = t.data[4];
        trace.p_O = t.data[5];
        trace.p_P = t.data[6];
        trace.w_mode = t.data[7];
    }
    return trace;
}

} // namespace humplab
