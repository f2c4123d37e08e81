#include "qdspin/sweep_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace qdspin::io {

std::string format_sig9(double value) {
    char buf[40];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                      std::chars_format::general, 9);
    return std::string(buf, result.ptr);
}

std::string sweep_to_csv(const std::vector<analysis::SweepRow>& rows) {
    std::string out = kSweepHeader;
    out += '\n';
    for (const analysis::SweepRow& row : rows) {
        out += format_sig9(row.x);
        out += ',';
        out += format_sig9(row.g_over_kappa);
        out += ',';
        out += format_sig9(row.f_formula);
        out += ',';
        out += format_sig9(row.f_sim);
        out += ',';
        out += format_sig9(row.success_prob);
        out += '\n';
    }
    return out;
}

namespace {

double parse_field(const std::string& field, std::size_t line_no) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto result = std::from_chars(begin, end, value, std::chars_format::general);
    if (result.ec != std::errc() || result.ptr != end) {
        throw std::invalid_argument("sweep csv: line " + std::to_string(line_no) +
                                    ": not a number: '" + field + "'");
    }
    return value;
}

}  // namespace

std::vector<analysis::SweepRow> parse_sweep_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kSweepHeader) {
        throw std::invalid_argument("sweep csv: line 1: bad header");
    }
    std::vector<analysis::SweepRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (fields.size() != 5) {
            throw std::invalid_argument("sweep csv: line " + std::to_string(line_no) +
                                        ": expected 5 fields, got " +
                                        std::to_string(fields.size()));
        }
        rows.push_back(analysis::SweepRow{
            parse_field(fields[0], line_no), parse_field(fields[1], line_no),
            parse_field(fields[2], line_no), parse_field(fields[3], line_no),
            parse_field(fields[4], line_no)});
    }
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<analysis::SweepRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("sweep csv: cannot open '" + path + "' for writing");
    }
    const std::string text = sweep_to_csv(rows);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
        throw std::runtime_error("sweep csv: write to '" + path + "' failed");
    }
}

std::vector<analysis::SweepRow> read_sweep_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("sweep csv: cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_sweep_csv(buffer.str());
}

}  // namespace qdspin::io
