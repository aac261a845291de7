#include "isowall/csv.hpp"

#include <stdexcept>

namespace isowall {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : columns_(header.size()) {
    f_ = std::fopen(path.c_str(), "w");
    if (!f_) throw std::runtime_error("CsvWriter: cannot open " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        std::fprintf(f_, "%s%s", header[i].c_str(), i + 1 < header.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() {
    if (f_) std::fclose(f_);
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != columns_) throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        std::fprintf(f_, "%.12e%s", values[i], i + 1 < values.size() ? "," : "\n");
}

}  // namespace isowall
