#include <gtest/gtest.h>

#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"

// httplib pulls in <resolv.h>; keep it after the project headers.
#include <httplib.h>

extern char** environ;

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome run(const std::string& args) {
    const std::string command = std::string(INSIGHTMAP_CLI_PATH) + " " + args + " 2>/dev/null";
    Outcome result;
    FILE* pipe = popen(command.c_str(), "r");
    char buffer[4096];
    std::size_t n = 0;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, n);
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("insightmap-cli-" + std::to_string(::getpid()) + "-" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        fixtures::write_file((dir_ / "t4.csv").string(), fixtures::t4_csv());
        fixtures::write_file((dir_ / "league.csv").string(), fixtures::league_csv(2));
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, MineWritesCatalogAndSummary) {
    const auto r = run("mine --input " + path("t4.csv") + " --output " + path("c.json") + " --max-depth 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("insights=", 0), 0u) << r.out;
    EXPECT_NE(r.out.find("subspaces=5"), std::string::npos) << r.out;
    EXPECT_TRUE(fs::exists(path("c.json")));
}

TEST_F(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run("mine --output " + path("c.json")).code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("mine --input " + path("t4.csv") + " --output x --projection pca").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
    fixtures::write_file(path("ragged.csv"), "a,b\n1,2\n3\n");
    EXPECT_EQ(run("mine --input " + path("ragged.csv") + " --output " + path("c.json")).code, 1);
    fixtures::write_file(path("broken.json"), "{\"schemaVersion\":");
    EXPECT_EQ(run("describe --catalog " + path("broken.json")).code, 1);
    EXPECT_EQ(run("describe --catalog " + path("absent.json")).code, 1);
}

TEST_F(CliTest, MineIsByteDeterministic) {
    const std::string args = " --input " + path("league.csv") + " --dimensions year --max-depth 1 --output ";
    ASSERT_EQ(run("mine" + args + path("a.json")).code, 0);
    ASSERT_EQ(run("mine" + args + path("b.json")).code, 0);
    EXPECT_EQ(fixtures::read_file(path("a.json")), fixtures::read_file(path("b.json")));
}

TEST_F(CliTest, DescribeTopK) {
    ASSERT_EQ(run("mine --input " + path("league.csv") + " --dimensions year --max-depth 1 --output " + path("c.json")).code, 0);
    const auto three = run("describe --catalog " + path("c.json") + " --top 3");
    EXPECT_EQ(three.code, 0);
    EXPECT_EQ(line_count(three.out), 3u);
    const auto none = run("describe --catalog " + path("c.json") + " --top 0");
    EXPECT_EQ(none.code, 0);
    EXPECT_TRUE(none.out.empty());
    const auto many = run("describe --catalog " + path("c.json") + " --top 100000");
    EXPECT_EQ(many.code, 0);
    const auto summary = run("mine --input " + path("league.csv") + " --dimensions year --max-depth 1 --output " + path("d.json"));
    const auto count = std::stoul(summary.out.substr(summary.out.find('=') + 1));
    EXPECT_EQ(line_count(many.out), count);
}

TEST_F(CliTest, ServeEphemeralPortAndSigint) {
    int out_pipe[2];
    ASSERT_EQ(pipe(out_pipe), 0);
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, out_pipe[0]);
    const std::string data_dir = path("data");
    std::vector<std::string> args{INSIGHTMAP_CLI_PATH, "serve", "--port", "0", "--data-dir", data_dir};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    pid_t pid = 0;
    ASSERT_EQ(posix_spawn(&pid, argv[0], &actions, nullptr, argv.data(), environ), 0);
    posix_spawn_file_actions_destroy(&actions);
    close(out_pipe[1]);

    FILE* out = fdopen(out_pipe[0], "r");
    int port = 0;
    char line[256];
    while (fgets(line, sizeof line, out)) {
        if (std::sscanf(line, "port=%d", &port) == 1) break;
    }
    ASSERT_GT(port, 0);
    httplib::Client client("127.0.0.1", port);
    auto res = client.Get("/api/v1/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);

    kill(pid, SIGINT);
    int status = 0;
    waitpid(pid, &status, 0);
    fclose(out);
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 0);
    EXPECT_TRUE(fs::exists(data_dir));
}
