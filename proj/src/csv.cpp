#include "spinbath/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spinbath/errors.hpp"

namespace spinbath::csv {

std::vector<std::vector<double>> read_rows(const std::string& path,
                                           int columns) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    bool numeric = true;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header row
      throw IoError(path + ": non-numeric row '" + line + "'");
    }
    if (columns > 0 && static_cast<int>(row.size()) != columns) {
      throw IoError(path + ": expected " + std::to_string(columns) +
                    " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Writer::Writer(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot write " + path);
  stream_ = f;
}

Writer::~Writer() {
  if (stream_) std::fclose(static_cast<FILE*>(stream_));
}

void Writer::comment(const std::string& text) {
  std::fprintf(static_cast<FILE*>(stream_), "# %s\n", text.c_str());
}

void Writer::header(const std::vector<std::string>& names) {
  FILE* f = static_cast<FILE*>(stream_);
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::fprintf(f, "%s%s", names[i].c_str(),
                 i + 1 == names.size() ? "\n" : ",");
  }
}

void Writer::row(const std::vector<double>& values) {
  FILE* f = static_cast<FILE*>(stream_);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::fprintf(f, "%.17g%s", values[i], i + 1 == values.size() ? "\n" : ",");
  }
}

}  // namespace spinbath::csv
