#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + GHOSTSLOPES_CLI + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed");
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, GhostFirstPolynomial) {
    auto r = run("ghost -n 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "g_1(w) = (w - w_6)\n");
    auto empty = run("ghost -n 0");
    EXPECT_EQ(empty.code, 0);
    EXPECT_EQ(empty.out, "");
}

TEST(Cli, GhostTableRows) {
    auto r = run("ghost -n 8");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("(w - w_24)^3"), std::string::npos);
    EXPECT_NE(r.out.find("(w - w_48)^6"), std::string::npos);
    EXPECT_NE(r.out.find("(w - w_174)"), std::string::npos);
}

TEST(Cli, SlopesAtLargeRadius) {
    auto r = run("slopes -k 24 -r 10 --format json");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["newslopes"], nlohmann::json(std::vector<std::string>(6, "11/1")));
    EXPECT_EQ(j["m_of_k"], "2/1");
    EXPECT_EQ(j["dims"], nlohmann::json({8, 1, 6}));
}

TEST(Cli, ThresholdsJson) {
    auto r = run("thresholds -k 24 --format json");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["local"], nlohmann::json({"9/1", "6/1", "2/1", "1/1", "6/1", "9/1"}));
    EXPECT_EQ(j["provenance"], nlohmann::json({"closed", "closed", "sweep", "sweep", "closed", "closed"}));
}

TEST(Cli, PredictAndDist) {
    auto p = run("predict -k 24 --format json");
    ASSERT_EQ(p.code, 0);
    auto j = nlohmann::json::parse(p.out);
    EXPECT_EQ(j["exceptional"], 2);
    auto d = run("dist --k-range 24:60 --format csv -n 2");
    ASSERT_EQ(d.code, 0);
    EXPECT_EQ(d.out.rfind("k,kind,n,", 0), 0u);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("slopes -k 25").code, 1);
    EXPECT_EQ(run("ghost -p 9").code, 1);
    EXPECT_EQ(run("ghost --mode strict").code, 1);
    EXPECT_EQ(run("slopes -k 24 -r 1/0").code, 1);
    EXPECT_EQ(run("ghost --format yaml").code, 1);
    EXPECT_EQ(run("ghost -n 8 --k-ceiling 40").code, 2);
}

TEST(Cli, OutputIsByteStable) {
    for (const char* args : {"thresholds --k-range 24:200 --format json", "predict --k-range 24:120", "ghost -n 6 --format csv"}) {
        auto a = run(args), b = run(std::string(args) + " --jobs 3");
        ASSERT_EQ(a.code, 0);
        EXPECT_EQ(a.out, b.out) << args;
    }
}

TEST(Cli, DiskCacheRoundTrip) {
    auto dir = std::filesystem::temp_directory_path() / ("ghostslopes_cache_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::string env = "GHOST_SLOPES_CACHE=" + dir.string();
    auto cold = run("thresholds -k 24 --format json", env);
    ASSERT_EQ(cold.code, 0);
    EXPECT_FALSE(std::filesystem::is_empty(dir));
    auto warm = run("thresholds -k 24 --format json", env);
    EXPECT_EQ(cold.out, warm.out);
    EXPECT_EQ(cold.out, run("thresholds -k 24 --format json").out);
    std::filesystem::remove_all(dir);
}
