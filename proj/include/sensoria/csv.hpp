#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace sensoria::csv {

// Fixed text rendering for doubles so that repeated runs emit byte-identical
// files. %.12g round-trips every value the toolkit writes.
std::string format_double(double v);
std::string format_int(long long v);

std::string escape_field(const std::string& field);

class Writer {
  public:
    explicit Writer(const std::filesystem::path& path);

    void row(const std::vector<std::string>& fields);
    void row(std::initializer_list<std::string> fields) { row(std::vector<std::string>(fields)); }

    bool good() const { return out_.good(); }

  private:
    std::ofstream out_;
};

// Strict reader for the toolkit's own files (RFC-4180 quoting, no CRLF
// tolerance needed but accepted).
std::vector<std::vector<std::string>> read(const std::filesystem::path& path);

}  // namespace sensoria::csv
