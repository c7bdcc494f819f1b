#pragma once

#include <string>
#include <vector>

namespace spinbath::csv {

// Numeric CSV with '#' comment lines and an optional non-numeric header row.
// Rows must have exactly `columns` fields when columns > 0.
std::vector<std::vector<double>> read_rows(const std::string& path,
                                           int columns = 0);

struct Writer {
  explicit Writer(const std::string& path);
  ~Writer();
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void comment(const std::string& text);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);

 private:
  void* stream_;
};

}  // namespace spinbath::csv
