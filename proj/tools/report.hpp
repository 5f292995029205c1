#ifndef SGDLAB_TOOLS_REPORT_HPP_
#define SGDLAB_TOOLS_REPORT_HPP_

#include <string>
#include <vector>

namespace sgdlab::cli {

// Shortest round-trip decimal form ("%.17g"), independent of locale.
std::string fmt(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  // Throws std::runtime_error when the file cannot be written.
  void write(const std::string& path) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
};

// Static SVG line chart. Failures are reported on stderr and swallowed.
void write_line_chart(const std::string& path, const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace sgdlab::cli

#endif  // SGDLAB_TOOLS_REPORT_HPP_
