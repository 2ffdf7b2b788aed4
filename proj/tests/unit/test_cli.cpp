#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "twistlab/hermite.hpp"
#include "twistlab/projector.hpp"

using namespace twistlab;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " + std::string(TWISTLAB_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("twistlab_cli_test_" + name);
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string l;
    while (std::getline(in, l)) out.push_back(l);
    return out;
}

bool has_digest_trailer(const std::string& text) {
    auto ls = lines_of(text);
    if (ls.empty()) return false;
    const std::string prefix = "# config-sha256=";
    const std::string& last = ls.back();
    return last.rfind(prefix, 0) == 0 && last.size() == prefix.size() + 64;
}

} // namespace

TEST_CASE("rho, classify and points") {
    Run r = run("rho --d 1 --pr 1/2 --qr 1/6");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["rho"] == "-1/6");
    CHECK(j["region"] == "R1");
    CHECK(j["estimate"] == "Strong");
    CHECK(j["estimate_class"] == "Strong");

    Run p = run("points --d 2");
    REQUIRE(p.code == 0);
    auto q = nlohmann::json::parse(p.out);
    CHECK(q["A"]["pr"] == "7/10");
    CHECK(q["A"]["qr"] == "1/2");
    CHECK(q["D"]["pr"] == "3/4");

    Run c = run("classify --d 2 --pr 5/6 --qr 1/3");
    REQUIRE(c.code == 0);
    CHECK(nlohmann::json::parse(c.out)["pentagon"] == "restricted-weak-vertex");
}

TEST_CASE("exit codes") {
    CHECK(run("rho --d 1 --pr 1/4 --qr 0").code == 1);
    CHECK(run("rho --d 1 --pr 1/2 --qr 1/6 --bogus").code == 1);
    CHECK(run("nonsense").code == 1);
    CHECK(run("").code == 1);
    CHECK(run("resolvent --pr 1 --qr 0 --n-max 2").code == 1);
    CHECK(run("verify --suite nope").code == 1);
    auto cfg = temp_path("starved.json");
    std::ofstream(cfg) << R"({"max_panels": 1})";
    CHECK(run("--config " + cfg.string() + " oscillatory --mu 10000 --scales 3").code == 2);
    auto bad = temp_path("bad.json");
    std::ofstream(bad) << R"({"no_such_key": 1})";
    CHECK(run("--config " + bad.string() + " points --d 1").code == 1);
    auto twf = temp_path("broken.twf");
    std::ofstream(twf) << "{\"magic\": \"nope\"}";
    CHECK(run("project --d 1 --k 0 --in " + twf.string() + " --out " + temp_path("x.twf").string()).code == 1);
}

TEST_CASE("CSV outputs carry a header and the config digest") {
    struct Case {
        std::string args, header;
    };
    std::vector<Case> cases = {
        {"kernel --d 1 --k 10 --samples 5", "r,varsigma,normalized_laguerre,asymptotic_main,error_envelope"},
        {"normscan --d 2 --k 10,20 --pr 1 --qr 0", "d,k,mu,pr,qr,method,value,certified,seed"},
        {"normscan --d 1 --k 50 --pr 1 --qr 1/4 --method ring_extremizer", "d,k,mu,pr,qr,method,value,certified,seed"},
        {"oscillatory --mu 100 --scales 1,2", "case,mu,scale,separation,abs_value,normalized_value"},
        {"resolvent --d 2 --pr 1/2 --qr 1/2 --n-max 3", "d,pr,qr,z_re,z_im,gap,test_id,ratio"},
    };
    for (const Case& c : cases) {
        INFO(c.args);
        Run r = run(c.args);
        REQUIRE(r.code == 0);
        auto ls = lines_of(r.out);
        REQUIRE(ls.size() >= 3);
        CHECK(ls.front() == c.header);
        CHECK(has_digest_trailer(r.out));
    }
    // Exact corner values in the CSV.
    Run n = run("normscan --d 1 --k 7 --pr 1 --qr 0");
    auto cells = lines_of(n.out)[1];
    CHECK(cells.find("corner_exact") != std::string::npos);
    CHECK(cells.find(",exact,") != std::string::npos);
}

TEST_CASE("the digest follows the resolved configuration") {
    auto digest = [](const std::string& text) { return lines_of(text).back(); };
    std::string a = run("kernel --d 1 --k 4 --samples 3").out;
    std::string b = run("kernel --d 1 --k 4 --samples 3").out;
    std::string c = run("kernel --d 1 --k 4 --samples 4").out;
    std::string e = run("--seed 9 kernel --d 1 --k 4 --samples 3").out;
    CHECK(digest(a) == digest(b));
    CHECK(digest(a) != digest(c));
    CHECK(digest(a) != digest(e));
}

TEST_CASE("verify is byte-identical across runs") {
    Run a = run("verify --suite region --seed 7", "TWISTLAB_THREADS=1");
    Run b = run("verify --suite region --seed 7", "TWISTLAB_THREADS=1");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(has_digest_trailer(a.out));
    CHECK(a.out.find("FAIL") == std::string::npos);
    Run c = run("verify --suite region --seed 8", "TWISTLAB_THREADS=1");
    CHECK(c.out != a.out);
}

TEST_CASE("--out writes the artifact to a file") {
    auto path = temp_path("kernel.csv");
    std::filesystem::remove(path);
    Run r = run("kernel --d 2 --k 3 --samples 4 --out " + path.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(has_digest_trailer(ss.str()));
}

TEST_CASE("project round trip through .twf files") {
    SpectralIndex s{1, 2};
    Grid g = default_grid(1, s.mu() + 4);
    HermiteTransform T(g, 4, 4);
    Field a = T.basis_function({{1}}, {{2}});
    Field b = T.basis_function({{0}}, {{3}});
    Field f = axpy(0.5, b, a);
    auto in = temp_path("in.twf"), out = temp_path("out.twf");
    write_twf(in.string(), f);
    for (std::string method : {"eigen", "kernel"}) {
        INFO(method);
        Run r = run("project --d 1 --k 2 --method " + method + " --in " + in.string() + " --out " + out.string());
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["mu"] == 5);
        Field p = read_twf(out.string());
        double tol = method == "eigen" ? 1e-6 : 1e-2;
        CHECK(relative_l2_distance(p, a, lp_norm(a, 2.0)) < tol);
    }
    // A unit window reproduces the plain projection.
    Run w = run("project --d 1 --k 2 --window one --in " + in.string() + " --out " + out.string());
    REQUIRE(w.code == 0);
    CHECK(relative_l2_distance(read_twf(out.string()), a, lp_norm(a, 2.0)) < 1e-6);
    CHECK(run("project --d 1 --k 2 --window bogus --in " + in.string() + " --out " + out.string()).code == 1);
    CHECK(run("project --d 2 --k 2 --in " + in.string() + " --out " + out.string()).code == 1);
}
