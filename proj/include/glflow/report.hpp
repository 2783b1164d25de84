#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace glflow {

// Append-only CSV of diagnostic rows: "t,kind,field,field,...".  Every
// number is printed with %.17g so values survive a round trip exactly and
// files from identical runs are byte-identical.
class ReportWriter {
 public:
  // fresh report (truncates)
  explicit ReportWriter(const std::string& path);
  // resumed report: existing file is cut back to byte_offset, then appended
  ReportWriter(const std::string& path, std::uint64_t byte_offset);

  void row(double t, const std::string& kind,
           const std::vector<std::string>& fields);
  std::uint64_t offset() const { return offset_; }

  static std::string num(double v);
  static std::string num(int v) { return std::to_string(v); }

 private:
  std::ofstream f_;
  std::uint64_t offset_ = 0;
};

struct ReportRow {
  double t;
  std::string kind;
  std::vector<std::string> fields;
  double fnum(std::size_t i) const;
};

std::vector<ReportRow> read_report(const std::string& path);

}  // namespace glflow
