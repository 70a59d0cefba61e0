#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace rotobs::app {

/// Formats a double with 17 significant digits ("%.17g"), so values round-trip.
std::string format_double(double x);

/// Comma-separated writer with a header row; one writer per file.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  CsvWriter& cell(double x);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(long long n);
  /// Terminates the current row; throws if the column count differs from the
  /// header.
  void end_row();
  void close();

 private:
  void separator();

  std::ofstream out_;
  std::string path_;
  std::size_t n_columns_ = 0;
  std::size_t in_row_ = 0;
};

/// Creates the directory (and parents) if needed.
void ensure_directory(const std::string& dir);

}  // namespace rotobs::app
