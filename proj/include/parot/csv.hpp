#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace parot {

/// Numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);

/// Shortest round-trip decimal representation ('.' decimal, no locale).
std::string format_double(double v);

/// Writes `header` then rows joined by ',' with LF endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  void sep();

  std::ostream& out_;
  bool first_ = true;
};

}  // namespace parot
