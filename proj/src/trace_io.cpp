#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "link_sentinel/dynamics.hpp"

namespace link_sentinel {

namespace {

double parse_double(const std::string& field, std::size_t line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw SimulationError("trace CSV line " + std::to_string(line_no) + ": bad number `" + field + "`");
    }
    return value;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        if (!field.empty() && field.back() == '\r') {
            field.pop_back();
        }
        fields.push_back(field);
    }
    return fields;
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
    const std::size_t n = trace.agent_count();
    out << 't';
    for (std::size_t i = 1; i <= n; ++i) {
        out << ",x" << i;
    }
    out << '\n';
    std::ostringstream row;
    row << std::setprecision(17);
    for (std::size_t s = 0; s < trace.sample_count(); ++s) {
        row.str({});
        row << trace.times[s];
        for (Eigen::Index i = 0; i < trace.states[s].size(); ++i) {
            row << ',' << trace.states[s][i];
        }
        out << row.str() << '\n';
    }
}

Trace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw SimulationError("trace CSV is empty");
    }
    const std::vector<std::string> header = split_csv(line);
    if (header.empty() || header.front() != "t") {
        throw SimulationError("trace CSV header must start with `t`");
    }
    const std::size_t n = header.size() - 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (header[i] != "x" + std::to_string(i)) {
            throw SimulationError("trace CSV header column " + std::to_string(i) + " must be `x" +
                                  std::to_string(i) + "`");
        }
    }

    Trace trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() != n + 1) {
            throw SimulationError("trace CSV line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(n + 1) + " fields");
        }
        const double t = parse_double(fields[0], line_no);
        if (!trace.times.empty() && !(t > trace.times.back())) {
            throw SimulationError("trace CSV line " + std::to_string(line_no) + ": times must increase");
        }
        RealVector x(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            x[static_cast<Eigen::Index>(i)] = parse_double(fields[i + 1], line_no);
        }
        trace.times.push_back(t);
        trace.states.push_back(std::move(x));
    }
    return trace;
}

}  // namespace link_sentinel
