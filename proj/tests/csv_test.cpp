#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "polyreg/csv.hpp"
#include "polyreg/errors.hpp"

namespace polyreg {
namespace {

Eigen::MatrixXd parse(const std::string& text, bool header = false) {
    std::istringstream in(text);
    return parse_numeric_csv(in, header);
}

TEST(CsvTest, ReferenceMarkers) {
    const auto m = load_markers(std::string(POLYREG_TEST_DATA_DIR) + "/reference_markers.csv");
    ASSERT_EQ(m.rows(), 5);
    ASSERT_EQ(m.cols(), 2);
    EXPECT_EQ(m(0, 0), 2.0);
    EXPECT_EQ(m(4, 1), 0.0);
}

TEST(CsvTest, SingleCell) {
    const auto m = parse("3.5\n");
    ASSERT_EQ(m.rows(), 1);
    ASSERT_EQ(m.cols(), 1);
    EXPECT_EQ(m(0, 0), 3.5);
}

TEST(CsvTest, HeaderBlanksAndCrlf) {
    const auto m = parse("a,b\r\n\r\n 1 , -2.5e-1\r\n+3,4\r\n\n", true);
    ASSERT_EQ(m.rows(), 2);
    EXPECT_EQ(m(0, 1), -0.25);
    EXPECT_EQ(m(1, 0), 3.0);
}

TEST(CsvTest, RaggedRowNamesLine) {
    try {
        parse("1,2\n3,4\n\n5\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
}

TEST(CsvTest, RejectsBadCells) {
    for (const char* bad : {"1,x\n", "1,\n", "1,nan\n", "1,inf\n", "1;2\n", "\"1\",2\n", "1,2,\n"}) {
        EXPECT_THROW(parse(std::string("0,0\n") + bad), ParseError) << bad;
    }
    // Only '.' is a decimal separator.
    EXPECT_THROW(parse("1,5\n2,5,1\n"), ParseError);
}

TEST(CsvTest, EmptyInput) {
    EXPECT_THROW(parse(""), ParseError);
    EXPECT_THROW(parse("\n\n"), ParseError);
    EXPECT_THROW(parse("header\n", true), ParseError);
}

TEST(CsvTest, FileErrorsCarrySource) {
    const std::string ragged = std::string(POLYREG_TEST_DATA_DIR) + "/ragged_markers.csv";
    try {
        load_markers(ragged);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.source(), ragged);
    }
    EXPECT_THROW(load_markers("/nonexistent/markers.csv"), ParseError);
}

TEST(CsvTest, PhenotypeMustBeSingleColumn) {
    const auto y = load_phenotype(std::string(POLYREG_TEST_DATA_DIR) + "/reference_pheno.csv");
    ASSERT_EQ(y.size(), 5);
    EXPECT_EQ(y(0), -0.72);
    EXPECT_THROW(load_phenotype(std::string(POLYREG_TEST_DATA_DIR) + "/reference_markers.csv"), ParseError);
}

}  // namespace
}  // namespace polyreg
