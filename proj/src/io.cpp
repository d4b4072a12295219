#include "boseloc/io.hpp"

#include <cstdio>

namespace boseloc {

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
    if (!out_) throw ConfigError("cannot open output file: " + path.string());
    out_ << join(header) << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw ConfigError("csv row width mismatch");
    out_ << join(cells) << '\n';
    if (!out_) throw ConfigError("csv write failed");
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path.string());
    out << content;
    if (!out) throw ConfigError("write failed: " + path.string());
}

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create directory: " + dir.string());
}

}  // namespace boseloc
