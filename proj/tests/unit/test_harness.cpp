#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "singma/harness.hpp"

using namespace singma;
namespace fs = std::filesystem;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("singma_unit_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

Config make(std::initializer_list<std::pair<const char*, const char*>> kv) {
    Config c;
    for (const auto& [k, v] : kv) c.set(k, v);
    return c;
}
}  // namespace

TEST_CASE("csv numbers round-trip at 15 significant digits") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_int_distribution<int> E(-300, 300);
    CsvTable t;
    t.header = {"x1", "x2", "u"};
    for (int i = 0; i < 1000; ++i) {
        t.add_row({csv_number(std::ldexp(U(rng), E(rng))), csv_number(U(rng)), csv_number(-std::abs(U(rng)))});
    }
    const CsvTable back = parse_csv(to_csv(t));
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (int j = 0; j < 3; ++j) {
            const double v = std::strtod(back.rows[i][j].c_str(), nullptr);
            CHECK(csv_number(v) == t.rows[i][j]);
        }
    }
    CHECK(csv_number(0.1) == "0.1");
    CHECK(csv_number(1.0 / 3.0) == "0.333333333333333");
}

TEST_CASE("csv layout") {
    CsvTable empty;
    empty.header = {"a", "b"};
    CHECK(to_csv(empty) == "a,b\n");
    CsvTable q;
    q.header = {"name", "note"};
    q.add_row({"w(n=2,p=1)", "say \"hi\"\nthere"});
    const std::string text = to_csv(q);
    CHECK(text.find('\r') == std::string::npos);
    const CsvTable back = parse_csv(text);
    CHECK(back.rows[0][0] == "w(n=2,p=1)");
    CHECK(back.rows[0][1] == "say \"hi\"\nthere");
    CHECK_THROWS(q.add_row({"one"}));
    CHECK(q.column("note") == 1);
}

TEST_CASE("config parsing and validation") {
    const Config c = Config::parse("# comment\nsolver.h = 0.0078125\n\nrhs.p=4\n");
    CHECK(c.real("solver.h", 0.0) == 0.0078125);
    CHECK(c.real("rhs.p", 0.0) == 4.0);
    CHECK_THROWS_AS(Config::parse("solver.h 0.1"), ConfigError);

    try {
        validate_config("verify-barriers", make({{"verify.alpha", "1.5"}}));
        FAIL("no error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "verify.alpha");
        CHECK(std::string(e.what()) == "verify.alpha 1.5 out of range (0,1)");
    }
    CHECK_THROWS_AS(validate_config("solve", make({{"solver.hh", "0.1"}})), ConfigError);
    CHECK_THROWS_AS(validate_config("solve", make({{"solver.h", "abc"}})), ConfigError);
    CHECK_THROWS_AS(validate_config("solve", make({{"solver.damping", "0"}})), ConfigError);
    CHECK_THROWS_AS(validate_config("solve", make({{"domain.n", "3"}})), ConfigError);
    CHECK_THROWS_AS(validate_config("solve", make({{"rhs.kind", "affine"}})), ConfigError);
    CHECK_THROWS_AS(validate_config("bootstrap", make({{"bootstrap.q", "1.5"}})), ConfigError);
    CHECK_THROWS_AS(validate_config("nonsense", Config{}), ConfigError);
    CHECK_NOTHROW(validate_config("mixc-probe", make({{"rhs.kind", "affine"}, {"domain.gamma", "0.5"}})));

    const SolveConfig sc = solve_config_from(make({{"rhs.kind", "affine"}}));
    CHECK(sc.damping == 0.25);
    CHECK(solve_config_from(Config{}).damping == 0.5);
}

TEST_CASE("run: exit codes and outputs") {
    const fs::path dir = scratch_dir("run");
    setenv("SINGMA_OUTPUT_DIR", dir.c_str(), 1);
    std::ostringstream log;

    SUBCASE("bootstrap writes one row per step") {
        const RunOutcome r = run("bootstrap", make({{"bootstrap.n", "3"}, {"bootstrap.q", "1"}, {"bootstrap.steps", "10"}}), log);
        CHECK(r.exit_code == 0);
        const CsvTable t = read_csv((dir / "bootstrap.csv").string());
        CHECK(t.rows.size() == 10);
        for (const auto& row : t.rows) CHECK(row[t.column("pass")] == "pass");
    }
    SUBCASE("configuration errors exit with 2") {
        CHECK(run("verify-barriers", make({{"verify.alpha", "1.5"}}), log).exit_code == 2);
        CHECK(log.str().find("verify.alpha") != std::string::npos);
    }
    SUBCASE("verify-barriers is deterministic") {
        const Config c = make({{"verify.samples", "300"}, {"seed", "5"}});
        CHECK(run("verify-barriers", c, log).exit_code == 0);
        const std::string first = slurp((dir / "verify-barriers.csv").string());
        CHECK(run("verify-barriers", c, log).exit_code == 0);
        CHECK(slurp((dir / "verify-barriers.csv").string()) == first);
        const CsvTable t = parse_csv(first);
        CHECK(t.header == std::vector<std::string>{"barrier", "check", "samples", "worst_margin", "pass"});
        bool has_sub = false, has_super = false, has_p1 = false;
        for (const auto& row : t.rows) {
            has_sub = has_sub || row[0].rfind("sub_valpha", 0) == 0;
            has_super = has_super || row[0].rfind("super_w(", 0) == 0;
            has_p1 = has_p1 || row[0].rfind("explicit_p1", 0) == 0;
        }
        CHECK((has_sub && has_super && has_p1));
    }
    SUBCASE("solve writes nodes, summary and timing") {
        const Config c = make({{"domain.kind", "ball"}, {"rhs.kind", "degenerate"}, {"solver.h", "0.125"}});
        CHECK(run("solve", c, log).exit_code == 0);
        const CsvTable nodes = read_csv((dir / "solve_nodes.csv").string());
        CHECK(nodes.header == std::vector<std::string>{"x1", "x2", "u"});
        CHECK(nodes.rows.size() > 100);
        const std::string summary = slurp((dir / "solve_summary.csv").string());
        CHECK(run("solve", c, log).exit_code == 0);
        CHECK(slurp((dir / "solve_summary.csv").string()) == summary);
        CHECK(slurp((dir / "solve_nodes.csv").string()) == to_csv(nodes));
        CHECK(fs::exists(dir / "solve_timing.csv"));
    }
    SUBCASE("compare and fit-exponent on barriers") {
        CHECK(run("compare", make({{"compare.lower", "sub_valpha"}, {"compare.upper", "super_w"}, {"compare.samples", "2000"}}), log)
                  .exit_code == 0);
        CHECK(run("compare", make({{"compare.lower", "super_w"}, {"compare.upper", "sub_valpha"}, {"compare.samples", "2000"}}), log)
                  .exit_code == 1);
        CHECK(run("fit-exponent", make({{"fit.source", "explicit_ujl"}, {"rhs.p", "4"}}), log).exit_code == 0);
    }
    SUBCASE("reproduce-all summary") {
        const RunOutcome r = run("reproduce-all", make({{"acceptance.criteria", "3,9"}}), log);
        CHECK(r.exit_code == 0);
        const CsvTable t = read_csv((dir / "reproduce-all.csv").string());
        CHECK(t.header == std::vector<std::string>{"id", "name", "expected", "measured", "tolerance", "pass", "seed"});
        CHECK(t.rows.size() == 2);
    }
    unsetenv("SINGMA_OUTPUT_DIR");
    fs::remove_all(dir);
}
