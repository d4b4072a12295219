#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "boseloc/errors.hpp"

namespace boseloc {

// Fixed %.12g formatting so identical runs give byte-identical outputs.
std::string format_g(double v);

std::string join(const std::vector<std::string>& parts, char sep = ',');

// Line-buffered CSV writer; header written on construction.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);

  private:
    std::ofstream out_;
    std::size_t width_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);
void ensure_directory(const std::filesystem::path& dir);

}  // namespace boseloc
