#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polyreg/commands.hpp"
#include "polyreg/config.hpp"
#include "polyreg/errors.hpp"

namespace polyreg {
namespace {

RunConfig reference_config() {
    RunConfig c;
    c.marker_path = std::string(POLYREG_TEST_DATA_DIR) + "/reference_markers.csv";
    c.phenotype_path = std::string(POLYREG_TEST_DATA_DIR) + "/reference_pheno.csv";
    c.model_spec = "auto-degree:2";
    return c;
}

bool has_line(const std::string& text, const std::string& line) {
    return text.find(line + "\n") != std::string::npos;
}

TEST(CmdFitTest, ERRBLUP1) {
    RunConfig c = reference_config();
    c.penalties = {parse_penalty_rule("deg:1=l2:1"), parse_penalty_rule("deg:2=l2:1")};
    c.method = Method::Ridge;
    const auto out = cmd_fit(c);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_TRUE(has_line(out.text, "fit.original.coef.1*2=-0.48")) << out.text;
    ASSERT_TRUE(out.bundle.has_value());
    EXPECT_EQ(out.bundle->fits.size(), 1u);
}

TEST(CmdFitTest, TranslatedCodingIsLabelled) {
    RunConfig c = reference_config();
    c.translation = parse_translation("mean");
    const auto out = cmd_fit(c);
    EXPECT_TRUE(has_line(out.text, "fit.translated.shift=1.6,1")) << out.text;
    EXPECT_TRUE(has_line(out.text, "fit.translated.coef.1*2=-1.14")) << out.text;
}

TEST(CmdFitTest, Errors) {
    RunConfig c = reference_config();
    c.marker_path.clear();
    EXPECT_THROW(cmd_fit(c), ConfigError);
    c = reference_config();
    c.phenotype_path = c.marker_path;
    EXPECT_THROW(cmd_fit(c), ParseError);
    c = reference_config();
    c.model_spec = "1;2;3";
    EXPECT_THROW(cmd_fit(c), ModelError);
    c = reference_config();
    c.model_spec = "auto-degree:2";
    c.penalties = {parse_penalty_rule("deg:1=l2:1")};
    c.method = Method::Lasso;
    EXPECT_THROW(cmd_fit(c), ConfigError);
}

TEST(CmdInvarianceTest, ExitCodes) {
    RunConfig c = reference_config();
    c.translation = parse_translation("mean");
    c.method = Method::Ridge;
    c.expect_invariant = true;
    c.penalties = {parse_penalty_rule("deg:1=l2:1"), parse_penalty_rule("deg:2=l2:1")};
    auto out = cmd_invariance(c);
    EXPECT_EQ(out.exit_code, 1);
    EXPECT_TRUE(has_line(out.text, "invariance.verdict=NOT_INVARIANT")) << out.text;

    c.penalties = {parse_penalty_rule("deg:2=l2:1")};
    out = cmd_invariance(c);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_TRUE(has_line(out.text, "invariance.verdict=INVARIANT")) << out.text;
    EXPECT_TRUE(has_line(out.text, "fit.original.coef.1*2=-0.57")) << out.text;
    EXPECT_TRUE(has_line(out.text, "fit.translated.coef.1*2=-0.57")) << out.text;

    c.expect_invariant = false;
    c.penalties = {parse_penalty_rule("deg:1=l2:1"), parse_penalty_rule("deg:2=l2:1")};
    EXPECT_EQ(cmd_invariance(c).exit_code, 0);
}

TEST(CmdCheckModelTest, NoAdditiveM2Incomplete) {
    const auto out = cmd_check_model("1;1*2", std::nullopt);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_EQ(out.text, "model=const;1;1*2\nvariables=2\ncomplete=false\nmissing=2\n");
    EXPECT_TRUE(has_line(cmd_check_model("auto-degree:3", 4).text, "complete=true"));
    EXPECT_THROW(cmd_check_model("auto-degree:3", std::nullopt), ConfigError);
}

TEST(CmdExpandTest, ShiftsPolynomial) {
    // (x1 + 1)(x2 + 2) = x1*x2 + 2*x1 + x2 + 2
    const auto out = cmd_expand("1*2", parse_translation("1,2"), std::nullopt);
    EXPECT_TRUE(has_line(out.text, "translated=1*x1*x2 + 2*x1 + 1*x2 + 2")) << out.text;
    EXPECT_TRUE(has_line(out.text, "term.1*2=1"));
    EXPECT_TRUE(has_line(out.text, "term.const=2"));
    EXPECT_THROW(cmd_expand("1*2", parse_translation("mean"), std::nullopt), ConfigError);
    EXPECT_THROW(cmd_expand("1*2", parse_translation("1,2,3"), 2), DimensionMismatch);
    EXPECT_TRUE(has_line(cmd_expand("3:2", {}, std::nullopt).text, "translated=3*x2"));
}

TEST(OutputTest, DirectoryFlagAndEnv) {
    ::unsetenv(kOutputDirEnv);
    EXPECT_EQ(output_directory(std::nullopt), std::nullopt);
    ::setenv(kOutputDirEnv, "/tmp/from_env", 1);
    EXPECT_EQ(output_directory(std::nullopt), std::filesystem::path("/tmp/from_env"));
    EXPECT_EQ(output_directory(std::string("flag")), std::filesystem::path("flag"));
    ::unsetenv(kOutputDirEnv);
}

TEST(OutputTest, WritesFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "polyreg_commands_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    const auto out = cmd_fit(reference_config());
    write_outputs(*out.bundle, dir);
    std::ifstream report(dir / "report.txt");
    std::stringstream ss;
    ss << report.rdbuf();
    EXPECT_EQ(ss.str(), out.text);
    EXPECT_TRUE(std::filesystem::exists(dir / "coefficients.csv"));
    std::filesystem::remove_all(dir.parent_path());
}

}  // namespace
}  // namespace polyreg
