#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rirtrack {

/// Shortest-roundtrip decimal formatting for doubles; used everywhere a
/// report file is written so identical runs produce identical bytes.
std::string format_double(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // DataError when missing
};

CsvTable read_csv(const std::filesystem::path& path);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();

  void row(const std::vector<std::string>& cells);

 private:
  std::string path_;
  std::string buffer_;
  size_t columns_;
};

}  // namespace rirtrack
