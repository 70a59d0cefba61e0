#include "csv.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <stdexcept>

namespace rotobs::app {

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), n_columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  for (const std::string& h : header) cell(h);
  end_row();
}

void CsvWriter::separator() {
  if (in_row_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::cell(double x) {
  separator();
  out_ << format_double(x);
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  separator();
  out_ << s;
  return *this;
}

CsvWriter& CsvWriter::cell(long long n) {
  separator();
  out_ << n;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != n_columns_) {
    throw std::logic_error(path_ + ": row has " + std::to_string(in_row_) + " cells, header has " +
                           std::to_string(n_columns_));
  }
  out_ << '\n';
  in_row_ = 0;
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw std::runtime_error("failed writing " + path_);
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

}  // namespace rotobs::app
