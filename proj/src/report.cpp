#include "glflow/report.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace glflow {

ReportWriter::ReportWriter(const std::string& path) {
  f_.open(path, std::ios::binary | std::ios::trunc);
  if (!f_) throw std::runtime_error("report: cannot open '" + path + "'");
  std::string header = "# t,kind,fields...\n";
  f_ << header;
  f_.flush();
  offset_ = header.size();
}

ReportWriter::ReportWriter(const std::string& path, std::uint64_t byte_offset) {
  std::error_code ec;
  std::uintmax_t sz = std::filesystem::file_size(path, ec);
  if (ec)
    throw std::runtime_error("report: cannot stat '" + path + "' for resume");
  if (sz < byte_offset)
    throw std::runtime_error(
        "report: '" + path + "' is shorter than the checkpoint offset");
  std::filesystem::resize_file(path, byte_offset, ec);
  if (ec) throw std::runtime_error("report: cannot truncate '" + path + "'");
  f_.open(path, std::ios::binary | std::ios::app);
  if (!f_) throw std::runtime_error("report: cannot reopen '" + path + "'");
  offset_ = byte_offset;
}

std::string ReportWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void ReportWriter::row(double t, const std::string& kind,
                       const std::vector<std::string>& fields) {
  std::string line = num(t) + "," + kind;
  for (const std::string& f : fields) line += "," + f;
  line += "\n";
  f_ << line;
  f_.flush();
  if (!f_) throw std::runtime_error("report: write failed");
  offset_ += line.size();
}

double ReportRow::fnum(std::size_t i) const {
  if (i >= fields.size())
    throw std::out_of_range("report row '" + kind + "' lacks field " +
                            std::to_string(i));
  return std::stod(fields[i]);
}

std::vector<ReportRow> read_report(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("report: cannot open '" + path + "'");
  std::vector<ReportRow> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string item;
    ReportRow r;
    if (!std::getline(ss, item, ',')) continue;
    r.t = std::stod(item);
    if (!std::getline(ss, r.kind, ',')) continue;
    while (std::getline(ss, item, ',')) r.fields.push_back(item);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace glflow
