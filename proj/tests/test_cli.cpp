#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("jbd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) const {
        const std::string cmd = std::string(JBD_CLI_PATH) + " " + args + " >" + (dir_ / "stdout").string() +
                                " 2>" + (dir_ / "stderr").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::size_t rows(const std::string& out) const {
        std::ifstream in(dir_ / out / "diagnostics.csv");
        std::size_t n = 0;
        std::string line;
        while (std::getline(in, line)) ++n;
        return n == 0 ? 0 : n - 1;
    }

    std::string out_flag(const std::string& name) const { return "--out " + (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, GeneratorRunSucceeds) {
    EXPECT_EQ(run("--gen a1l1:80,100 --steps 12 --tau 1e-10 --extract 2:largest:b --diag full " + out_flag("o")), 0);
    EXPECT_EQ(rows("o"), 12u);
    EXPECT_TRUE(fs::exists(dir_ / "o" / "estimates.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "o" / "report.txt"));
}

TEST_F(Cli, UsageErrorsExitWithOne) {
    EXPECT_EQ(run("--gen a1l1:10,10 --reorth sometimes " + out_flag("o")), 1);
    EXPECT_EQ(run("--gen a1l1:10,10 --a x.mtx " + out_flag("o")), 1);
    EXPECT_EQ(run("--gen a1l1:10,10 --steps many " + out_flag("o")), 1);
    EXPECT_EQ(run("--bogus"), 1);
    EXPECT_EQ(run("--a /nonexistent.mtx --l l1d " + out_flag("o")), 1);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, BreakdownExitsWithTwo) {
    std::ofstream(dir_ / "a.mtx") << "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 0.8\n2 2 0.6\n";
    std::ofstream(dir_ / "l.mtx") << "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 0.6\n2 2 0.8\n";
    EXPECT_EQ(run("--a " + (dir_ / "a.mtx").string() + " --l " + (dir_ / "l.mtx").string() +
                  " --inner exact --steps 5 " + out_flag("o")),
              2);
    EXPECT_EQ(rows("o"), 2u);
}

TEST_F(Cli, FlagsOverrideConfigFile) {
    const fs::path cfg = dir_ / "run.ini";
    std::ofstream(cfg) << "gen=a1l1:60,10\nsteps=5\nreorth=none\nout=" << (dir_ / "from_file").string() << "\n";
    EXPECT_EQ(run("--config " + cfg.string()), 0);
    EXPECT_EQ(rows("from_file"), 5u);
    EXPECT_EQ(run("--config " + cfg.string() + " --steps 7 " + out_flag("flag")), 0);
    EXPECT_EQ(rows("flag"), 7u);
}

TEST_F(Cli, SameSeedSameBytes) {
    const std::string args = "--gen random:30,25,20 --seed 7 --steps 10 --extract 3:smallest:bhat ";
    ASSERT_EQ(run(args + out_flag("one")), 0);
    ASSERT_EQ(run(args + out_flag("two")), 0);
    for (const char* name : {"diagnostics.csv", "estimates.csv", "report.txt"}) {
        std::ifstream a(dir_ / "one" / name, std::ios::binary), b(dir_ / "two" / name, std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        EXPECT_EQ(sa.str(), sb.str()) << name;
    }
}
