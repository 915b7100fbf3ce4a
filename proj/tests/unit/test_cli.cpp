#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "kdvlab/cli.hpp"
#include "kdvlab/config.hpp"
#include "kdvlab/errors.hpp"

using namespace kdvlab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args, const std::map<std::string, std::string>& env = {}) {
    std::ostringstream out, err;
    const EnvLookup lookup = [&env](const char* name) -> const char* {
        const auto it = env.find(name);
        return it == env.end() ? nullptr : it->second.c_str();
    };
    const int code = dispatch(args, out, err, lookup);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("kdvlab_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("config keys and values") {
    RunConfig c;
    apply_setting(c, "epsilon", "0.25");
    apply_setting(c, "regime", "2");
    apply_setting(c, "n", "64");
    CHECK(c.params.epsilon == 0.25);
    CHECK(c.params.regime == Regime::FastOde);
    CHECK(c.n == 64);
    try {
        apply_setting(c, "epsilom", "1");
        FAIL("unknown key accepted");
    } catch (const DomainError& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
        CHECK(std::string(e.what()).find("epsilon") != std::string::npos);
    }
    CHECK_THROWS_AS(apply_setting(c, "n", "many"), DomainError);
    CHECK(format_real(0.1) == "0.1");
    CHECK(env_name("L") == "KDVLAB_L");
    CHECK(resolved(c).size() == config_keys().size());
}

TEST_CASE("config text") {
    RunConfig c;
    apply_config_text(c, "# comment\n a = 0.5 \n\nT=2 # trailing\n");
    CHECK(c.params.a == 0.5);
    CHECK(c.T == 2.0);
    CHECK_THROWS_AS(apply_config_text(c, "just words\n"), DomainError);
}

TEST_CASE("precedence: defaults < file < environment < flags") {
    const fs::path dir = fresh_dir("precedence");
    fs::create_directories(dir);
    const fs::path cfg = dir / "run.cfg";
    std::ofstream(cfg) << "a = 0.2\nb = -0.5\nc = 0.3\n";

    const auto manifest_of = [&](const std::vector<std::string>& args, const std::map<std::string, std::string>& env) {
        const fs::path out = dir / "out";
        fs::remove_all(out);
        std::vector<std::string> full{"--config", cfg.string(), "--out", out.string()};
        full.insert(full.end(), args.begin(), args.end());
        full.push_back("profiles");
        REQUIRE(run(full, env).code == 0);
        return slurp(out / "manifest.txt");
    };
    const std::string m = manifest_of({"--c", "0.9"}, {{"KDVLAB_B", "-0.7"}, {"KDVLAB_C", "0.4"}});
    CHECK(m.find("a=0.2\n") != std::string::npos);
    CHECK(m.find("b=-0.7\n") != std::string::npos);
    CHECK(m.find("c=0.9\n") != std::string::npos);
    CHECK(m.find("epsilon=0.1\n") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--epsilom", "1", "profiles"}).code == 2);
    CHECK(run({"--n", "many", "profiles"}).code == 2);
    CHECK(run({"profiles"}, {{"KDVLAB_N", "x"}}).code == 2);

    const Run critical = run({"--L", "6.283185307179586", "simulate"});
    CHECK(critical.code == 1);
    CHECK(critical.err.rfind("CriticalLength", 0) == 0);
    CHECK(run({"--L", "6.283185307179586", "--allow-critical", "--n", "20", "--T", "0.01", "simulate"}).code == 0);

    const Run zero_eps = run({"--epsilon", "0", "simulate"});
    CHECK(zero_eps.code == 1);
    CHECK(zero_eps.err.rfind("NonPositiveEpsilon", 0) == 0);
}

TEST_CASE("tables carry the manifest hash and a header") {
    const Run r = run({"critical-lengths", "--max", "10"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string first, second, third;
    std::getline(lines, first);
    std::getline(lines, second);
    std::getline(lines, third);
    CHECK(first.rfind("# kdvlab 0.1.0 manifest=", 0) == 0);
    CHECK(first.size() == std::string("# kdvlab 0.1.0 manifest=").size() + 16);
    CHECK(second == "k,l,value");
    CHECK(third == "1,1,6.283185307179586");
}

TEST_CASE("reruns are byte-identical") {
    const fs::path d1 = fresh_dir("rerun1"), d2 = fresh_dir("rerun2");
    const std::vector<std::string> common{"--n", "30", "--T", "0.2", "--snapshot_stride", "5"};
    auto a1 = common, a2 = common;
    a1.insert(a1.end(), {"--out", d1.string(), "simulate"});
    a2.insert(a2.end(), {"--out", d2.string(), "simulate"});
    REQUIRE(run(a1).code == 0);
    REQUIRE(run(a2).code == 0);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(d1)) {
        if (entry.path().extension() != ".csv") continue;
        CHECK(slurp(entry.path()) == slurp(d2 / entry.path().filename()));
        ++compared;
    }
    CHECK(compared >= 3);
    CHECK(slurp(d1 / "manifest.txt").find("output_dir=" + d1.string()) != std::string::npos);

    const Run s1 = run({"--seed", "3", "stability-map", "--samples", "6", "--n", "30"});
    const Run s2 = run({"--seed", "3", "stability-map", "--samples", "6", "--n", "30"});
    CHECK(s1.code == 0);
    CHECK(s1.out == s2.out);
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("manifest hash") {
    RunManifest m;
    m.subcommand = "simulate";
    const std::string h = m.hash();
    m.output_dir = "/somewhere";
    m.wall_clock_seconds = 12.0;
    CHECK(m.hash() == h);
    m.config.params.a = 0.3;
    CHECK(m.hash() != h);
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("subcommands") {
    SUBCASE("profiles") {
        const Run r = run({"--n", "20", "profiles"});
        CHECK(r.code == 0);
        CHECK(r.out.find("x,M,f,h_at_z1") != std::string::npos);
    }
    SUBCASE("spectrum") {
        const Run r = run({"--n", "20", "spectrum"});
        CHECK(r.code == 0);
        CHECK(r.out.find("abscissa") != std::string::npos);
    }
    SUBCASE("sweep") {
        const Run r = run({"--n", "40", "sweep", "--regime", "1", "--eps", "0.2,0.1"});
        CHECK(r.code == 0);
        CHECK(r.out.find("eps,error,mu_hat") != std::string::npos);
        CHECK(run({"sweep"}).code == 2);
    }
    SUBCASE("simulate with manufactured forcing") {
        const Run r = run({"--n", "20", "--T", "0.05", "--disturbance", "mms", "simulate"});
        CHECK(r.code == 0);
    }
    SUBCASE("verify") {
        const Run r = run({"verify"});
        CHECK(r.code == 0);
        CHECK(r.out.find("FAIL") == std::string::npos);
    }
}
