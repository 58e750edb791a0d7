#include "kzu/suite.hpp"

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace kzu;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Scratch directory removed on scope exit.
struct Scratch {
    fs::path dir;
    Scratch() {
        static int counter = 0;
        dir = fs::temp_directory_path() / ("kzu-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

Run cli(const Scratch& s, const std::string& args) {
    const fs::path out = s.dir / "stdout", err = s.dir / "stderr";
    const std::string cmd = std::string(KZU_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_SUITE("suite") {
    TEST_CASE("weight grammar") {
        using W = std::vector<std::vector<int>>;
        CHECK(parse_weight_list("w,w,w,w", 1) == W{{1}, {1}, {1}, {1}});
        CHECK(parse_weight_list("2w; 0; 3", 1) == W{{2}, {0}, {3}});
        CHECK(parse_weight_list("w1,w2", 2) == W{{1, 0}, {0, 1}});
        CHECK(parse_weight_list("w1+w2,2w2,(3,1)", 2) == W{{1, 1}, {0, 2}, {3, 1}});
        CHECK(parse_weight_list("", 2).empty());
        CHECK_THROWS(parse_weight_list("w3", 2));
        CHECK_THROWS(parse_weight_list("2", 2));  // bare integers only for rank 1
        CHECK_THROWS(parse_weight_list("(1,0,0)", 2));
        CHECK_THROWS(parse_weight_list("v1", 2));
    }

    TEST_CASE("point lists") {
        CHECK(parse_point_list("0, 1, 3/2, -7") == std::vector<Rational>{0, 1, ratio(3, 2), -7});
        CHECK_THROWS(parse_point_list("0,x"));
    }

    TEST_CASE("instance validation") {
        const auto ww = parse_weight_list("w,w", 1);
        std::vector<Rational> z{0, 1};
        CHECK_NOTHROW(Instance("A1", ww, 1, z));
        CHECK_THROWS_AS(Instance("A1", ww, 0, z), std::invalid_argument);
        CHECK_THROWS_AS(Instance("A1", {}, 1, {}), std::invalid_argument);
        CHECK_THROWS_AS(Instance("A1", ww, 1, {0, 0}), std::invalid_argument);
        CHECK_THROWS_AS(Instance("A1", ww, 1, {0, 1, 2}), std::invalid_argument);
        CHECK_THROWS_AS(Instance("A1", {{2}, {1}}, 1, z), std::invalid_argument);  // outside the level-1 alcove
        CHECK_THROWS_AS(Instance("A1", {{-1}, {1}}, 1, z), std::invalid_argument);
        CHECK_THROWS_AS(Instance("A2", ww, 1, z), std::invalid_argument);
        Instance ok("A1", parse_weight_list("w,w,w,w", 1), 1, {0, 1, 3, 7});
        CHECK(ok.blocks().dim() == 1);
        CHECK(ok.describe().at("level") == 1);
    }

    TEST_CASE("criterion results combine counted checks only") {
        const CheckRecord info{"x", "informational", 1.0, nullptr, CheckStatus::Fail, false};
        const CheckRecord good{"x", "real", 1.0, nullptr, CheckStatus::Pass};
        const CheckRecord bad{"x", "real", 1.0, nullptr, CheckStatus::Fail};
        auto finished = [](std::vector<CheckRecord> checks) {
            CriterionResult r;
            for (auto& c : checks) r.add(c);
            r.finish();
            return r;
        };
        CHECK(finished({info}).status == CheckStatus::Inconclusive);
        const auto ok = finished({info, good});
        CHECK(ok.status == CheckStatus::Pass);
        CHECK(ok.summary == "1/1 checks pass");
        const auto mixed = finished({info, good, bad});
        CHECK(mixed.status == CheckStatus::Fail);
        CHECK(mixed.summary == "1/2 checks pass");
    }
}

TEST_SUITE("cli") {
    TEST_CASE("roots and blocks succeed") {
        Scratch s;
        const auto roots = cli(s, "roots --out-dir " + (s.dir / "r").string());
        CHECK(roots.code == 0);
        const auto blocks = cli(s, "blocks --algebra A1 --level 1 --weights w,w,w,w --out-dir " + (s.dir / "b").string());
        CHECK(blocks.code == 0);
        const Json rep = Json::parse(slurp(s.dir / "b" / "report.json"));
        CHECK(rep.at("status") == "pass");
        CHECK(contains(rep.dump(), "\"dim\":1"));
    }

    TEST_CASE("configuration errors exit with 2") {
        Scratch s;
        const std::string out = " --out-dir " + (s.dir / "o").string();
        CHECK(cli(s, "blocks --algebra A1 --level 1 --weights ''" + out).code == 2);
        CHECK(cli(s, "blocks --algebra Q1 --level 1 --weights w,w" + out).code == 2);
        CHECK(cli(s, "blocks --algebra A1 --level 1 --weights w,w --points 0,0" + out).code == 2);
        CHECK(cli(s, "metric --algebra A1 --level 2 --weights w,w,w,w --samples 10" + out).code == 2);
        CHECK(cli(s, "sv --algebra A1 --level 1 --weights w,w,w" + out).code == 2);
        CHECK(cli(s, "frobnicate").code == 2);
        std::ofstream(s.dir / "bad.json") << R"({"algebra": "A1", "levle": 2})";
        CHECK(cli(s, "blocks --config " + (s.dir / "bad.json").string() + out).code == 2);
    }

    TEST_CASE("config file with flag overrides") {
        Scratch s;
        std::ofstream(s.dir / "c.json") << R"({"algebra": "A1", "level": 3, "weights": ["w", "w"]})";
        const auto r = cli(s, "blocks --config " + (s.dir / "c.json").string() + " --level 1 --out-dir " +
                                  (s.dir / "o").string());
        CHECK(r.code == 0);
        const Json rep = Json::parse(slurp(s.dir / "o" / "report.json"));
        CHECK(rep.at("config").at("instance").at("level") == 1);
    }

    TEST_CASE("metric cache: hits, seed changes, corruption, level changes") {
        Scratch s;
        const std::string base = "metric --algebra A1 --level 2 --weights w,w,w,w --samples 20000 --cache-dir " +
                                 (s.dir / "cache").string();
        const auto first = cli(s, base + " --out-dir " + (s.dir / "a").string());
        REQUIRE(first.code != 2);
        CHECK(contains(first.err, "cache: blocks miss"));
        CHECK(contains(first.err, "cache: metric miss"));

        const auto second = cli(s, base + " --out-dir " + (s.dir / "b").string());
        CHECK(second.code == first.code);
        CHECK(contains(second.err, "cache: metric hit"));
        CHECK(slurp(s.dir / "a" / "report.json") == slurp(s.dir / "b" / "report.json"));
        CHECK(slurp(s.dir / "a" / "gram.json") == slurp(s.dir / "b" / "gram.json"));

        const auto reseeded = cli(s, base + " --seed 2 --out-dir " + (s.dir / "c").string());
        CHECK(contains(reseeded.err, "cache: blocks hit"));
        CHECK(contains(reseeded.err, "cache: metric miss"));
        CHECK(slurp(s.dir / "a" / "gram.json") != slurp(s.dir / "c" / "gram.json"));

        for (const auto& e : fs::directory_iterator(s.dir / "cache"))
            if (e.path().filename().string().rfind("metric-", 0) == 0) std::ofstream(e.path()) << "{ not json";
        const auto repaired = cli(s, base + " --out-dir " + (s.dir / "d").string());
        CHECK(contains(repaired.err, "warning: corrupt cache entry"));
        CHECK(contains(repaired.err, "cache: metric miss"));
        CHECK(slurp(s.dir / "a" / "gram.json") == slurp(s.dir / "d" / "gram.json"));

        const auto relevel = cli(s, "metric --algebra A1 --level 3 --weights w,w,w,w --samples 20000 --cache-dir " +
                                        (s.dir / "cache").string() + " --out-dir " + (s.dir / "e").string());
        CHECK(contains(relevel.err, "cache: blocks miss"));
        CHECK(contains(relevel.err, "cache: metric miss"));
    }
}
