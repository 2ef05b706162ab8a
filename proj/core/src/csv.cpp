#include "polyreg/csv.hpp"

#include <fstream>
#include <string>
#include <vector>

#include "polyreg/errors.hpp"
#include "text_util.hpp"

namespace polyreg {

Eigen::MatrixXd parse_numeric_csv(std::istream& in, bool header) {
    std::vector<double> cells;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    bool header_pending = header;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view content = detail::trim(line);
        if (content.empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        const auto fields = detail::split(content, ',');
        if (rows == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw ParseError("expected " + std::to_string(width) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string_view cell = detail::trim(fields[c]);
            double v = 0.0;
            if (!detail::parse_double(cell, v)) {
                throw ParseError("field " + std::to_string(c + 1) + " ('" + std::string(cell) +
                                     "') is not a finite number",
                                 line_no);
            }
            cells.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) throw ParseError("no data rows", 0);

    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cells[i * width + j];
        }
    }
    return out;
}

namespace {

Eigen::MatrixXd read_file(const std::filesystem::path& path, bool header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file", 0, path.string());
    try {
        return parse_numeric_csv(in, header);
    } catch (const ParseError& e) {
        throw e.with_source(path.string());
    }
}

}  // namespace

MarkerMatrix load_markers(const std::filesystem::path& path, bool header) {
    return MarkerMatrix(read_file(path, header));
}

Eigen::VectorXd load_phenotype(const std::filesystem::path& path, bool header) {
    Eigen::MatrixXd m = read_file(path, header);
    if (m.cols() != 1) {
        throw ParseError("phenotype file must have a single column, found " +
                             std::to_string(m.cols()),
                         0, path.string());
    }
    return m.col(0);
}

}  // namespace polyreg
