#pragma once

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

namespace rotobs::testing {

/// Collects named conditions and prints one PASS/FAIL line.
class Verdict {
 public:
  explicit Verdict(std::string name) : name_(std::move(name)) {}

  void require(bool ok, const std::string& what) {
    if (!ok) failed_.push_back(what);
  }
  void note(const std::string& text) { notes_.push_back(text); }

  /// Prints "PASS <name>: notes" or "FAIL <name>: failed conditions; notes"
  /// and returns the process exit status.
  int finish() const {
    std::string line = (failed_.empty() ? "PASS " : "FAIL ") + name_ + ":";
    for (const auto& f : failed_) line += " [failed] " + f + ";";
    for (const auto& n : notes_) line += " " + n + ";";
    std::puts(line.c_str());
    return failed_.empty() ? 0 : 1;
  }

 private:
  std::string name_;
  std::vector<std::string> failed_;
  std::vector<std::string> notes_;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string fmt_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace rotobs::testing
