#include "nld/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "nld/errors.hpp"

namespace nld {

std::string format_double(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void CsvWriter::title(const std::string& text) {
    buffer_ += "# ";
    buffer_ += text;
    buffer_ += '\n';
}

void CsvWriter::header(const std::vector<std::string>& columns) {
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i)
            buffer_ += ',';
        buffer_ += columns[i];
    }
    buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (columns_ != 0 && cells.size() != columns_)
        throw argument_error("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open for writing: " + path);
    out << buffer_;
    if (!out)
        throw io_error("short write: " + path);
}

std::string cell(double v) { return format_double(v); }
std::string cell(const std::string& s) { return s; }
std::string cell(bool b) { return b ? "true" : "false"; }
std::string cell(int v) { return std::to_string(v); }

} // namespace nld
