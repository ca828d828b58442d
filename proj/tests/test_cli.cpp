#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#ifndef TENFOLD_CLI
#error "TENFOLD_CLI must name the command line binary"
#endif

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(TENFOLD_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string tmp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("tenfold_cli_" + name)).string();
}

}  // namespace

TEST_CASE("generate, validate and index") {
    const std::string a = tmp("k1.json");
    REQUIRE(run("generate --model kitaev-chain --mu 1 --grid 32 -o " + a).code == 0);
    const Run v = run("validate " + a);
    CHECK(v.code == 0);
    CHECK(v.out.find("ok") != std::string::npos);
    const Run i = run("index " + a);
    CHECK(i.code == 0);
    CHECK(i.out.find("\"strong\":-1") != std::string::npos);
    std::filesystem::remove(a);
}

TEST_CASE("connect and verify-homotopy") {
    const std::string a = tmp("c1.json"), b = tmp("c2.json"), c = tmp("c3.json"), h = tmp("h.json");
    REQUIRE(run("generate --model kitaev-chain --mu 1 --grid 16 -o " + a).code == 0);
    REQUIRE(run("generate --model kitaev-chain --mu 0.5 --grid 16 -o " + b).code == 0);
    REQUIRE(run("generate --model kitaev-chain --mu 3 --grid 16 -o " + c).code == 0);
    CHECK(run("--s-grid 9 connect " + a + " " + b + " -o " + h).code == 0);
    const Run v = run("verify-homotopy " + h + " --quiet");
    CHECK(v.code == 0);
    CHECK(v.out.find("clean") != std::string::npos);
    CHECK(run("connect " + a + " " + c + " -o " + h).code == 3);
    for (const auto& f : {a, b, c, h}) std::filesystem::remove(f);
}

TEST_CASE("exit codes") {
    CHECK(run("").code == 1);
    CHECK(run("index " + tmp("missing.json")).code == 5);
    CHECK(run("generate --model kitaev-chain --mu 2 --grid 16").code == 2);
    CHECK(run("generate --model nonsense").code == 1);
}
