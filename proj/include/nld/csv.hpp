#pragma once

#include <string>
#include <vector>

namespace nld {

// Reproducible number formatting: scientific, 17 significant digits, '.'
// decimal point. Doubles round-trip exactly.
std::string format_double(double v);

/// Line-buffered CSV emitter. Rows are plain strings by the time they land
/// here; all determinism-sensitive formatting goes through format_double.
class CsvWriter {
  public:
    // Optional '#'-prefixed title lines (e.g. the lemma a table verifies)
    // come before the header row.
    void title(const std::string& text);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);

    const std::string& content() const { return buffer_; }
    void write_file(const std::string& path) const;

  private:
    std::string buffer_;
    std::size_t columns_ = 0;
};

std::string cell(double v);
std::string cell(const std::string& s);
std::string cell(bool b);
std::string cell(int v);

} // namespace nld
