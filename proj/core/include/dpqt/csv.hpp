#pragma once

#include <cstdio>
#include <string>
#include <vector>

// Minimal CSV writer: comma separators, LF line endings, floats at 12
// significant digits.

namespace dpqt {

class CsvWriter {
 public:
  void header(const std::vector<std::string>& names) { row_strings(names); }

  void row_strings(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }

  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
  }

  void row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format(v));
    row_strings(s);
  }

  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

}  // namespace dpqt
