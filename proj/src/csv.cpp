#include "cascade/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cascade {

std::string csv_num(double v)
{
    if (std::isnan(v))
        return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvFile::CsvFile(const std::string& path) : out_(path, std::ios::trunc)
{
    if (!out_)
        throw std::runtime_error("cannot open output file: " + path);
}

void CsvFile::comment(const std::string& line)
{
    out_ << "# " << line << "\n";
}

void CsvFile::header(const std::vector<std::string>& cols)
{
    row(cols);
}

void CsvFile::row(const std::vector<std::string>& cells)
{
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i)
            out_ << ",";
        out_ << cells[i];
    }
    out_ << "\n";
}

} // namespace cascade
