#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace cascade {

// Full double precision (17 significant digits); NaN renders as an empty
// cell.
std::string csv_num(double v);

class CsvFile {
public:
    explicit CsvFile(const std::string& path);

    void comment(const std::string& line); // "# ..."
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
};

} // namespace cascade
