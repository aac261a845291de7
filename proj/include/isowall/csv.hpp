#pragma once

#include <cstdio>
#include <span>
#include <string>
#include <vector>

namespace isowall {

// Comma-separated output, one header row, every numeric cell printed %.12e.
// Byte-identical output for identical inputs is part of the contract.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(std::span<const double> values);

  private:
    std::FILE* f_ = nullptr;
    std::size_t columns_ = 0;
};

}  // namespace isowall
