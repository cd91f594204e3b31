#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "stpp/commands.hpp"
#include "stpp/config.hpp"
#include "stpp/pattern_io.hpp"
#include "stpp/report_io.hpp"

using namespace stpp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("stpp_unit_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("axis parsing") {
    const auto a = parse_axis("0.01:0.05:0.01");
    REQUIRE(a.size() == 5);
    CHECK(a.back() == doctest::Approx(0.05));
    CHECK(parse_axis("0.1,0.3") == std::vector<double>{0.1, 0.3});
    CHECK(parse_axis(format_axis(a)) == a);
    CHECK_THROWS_AS(parse_axis("0.1:x:0.1"), ConfigError);
    CHECK_THROWS_AS(parse_axis("0.3,0.1"), ConfigError);
  }

  TEST_CASE("names") {
    CHECK(parse_corrections("all") == all_corrections());
    CHECK(parse_corrections("border,translation") ==
          std::vector<EdgeCorrection>{EdgeCorrection::Border, EdgeCorrection::Translation});
    CHECK_THROWS_AS(parse_corrections("toroidal"), ConfigError);
    try {
      parse_corrections("reflection");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("modified_border") != std::string::npos);
    }
    CHECK(parse_statistics("k,g").size() == 2);
    CHECK_THROWS_AS(parse_statistics("f"), ConfigError);
  }

  TEST_CASE("study round trip") {
    KeyValues kv;
    kv.set("scenario", "pcp2");
    kv.set("zeta", "0.4");
    kv.set("corrections", "isotropic,none");
    kv.set("statistics", "g");
    kv.set("intensity", "parametric(2)");
    kv.set("u_grid", "0.02:0.2:0.02");
    kv.set("n_sim", "12");
    kv.set("seed", "99");
    kv.set("power", "false");
    kv.set("info.note", "ignored");
    const StudyConfig c = study_from_kv(kv);
    CHECK(c.scenario.family == Family::Pcp2);
    CHECK(c.scenario.zeta == 0.4);
    CHECK(c.grid.nu() == 10);
    CHECK(c.grid.nv() == 25);
    CHECK(c.intensity.tag() == "parametric(2)");
    CHECK_FALSE(c.power);
    const StudyConfig d = study_from_kv(study_to_kv(c));
    CHECK(study_to_kv(d).to_string() == study_to_kv(c).to_string());
    CHECK(d.seed == 99);
    CHECK(d.n_sim == 12);
  }

  TEST_CASE("bad configurations") {
    auto bad = [](const std::string& k, const std::string& v) {
      KeyValues kv;
      kv.set(k, v);
      return kv;
    };
    CHECK_THROWS_AS(study_from_kv(bad("colour", "red")), ConfigError);
    CHECK_THROWS_AS(study_from_kv(bad("scenario", "lgcp")), ConfigError);
    CHECK_THROWS_AS(study_from_kv(bad("n_sim", "0")), ConfigError);
    CHECK_THROWS_AS(study_from_kv(bad("sigma", "-1")), ConfigError);
    CHECK_THROWS_AS(study_from_kv(bad("zeta", "2")), ConfigError);
    CHECK_THROWS_AS(study_from_kv(bad("seed", "abc")), ConfigError);
    CHECK_THROWS_AS(study_from_kv(bad("window.x1", "-3")), ConfigError);
  }
}

TEST_SUITE("pattern_io") {
  TEST_CASE("pattern round trip is exact") {
    TempDir dir("pattern");
    const STWindow w({0, 2}, {-1, 1}, {3, 5});
    const auto p = simulate_hpp(40, w, 3);
    KeyValues meta;
    meta.set("scenario", "hpp");
    write_pattern(dir.path / "p.csv", p, meta);
    CHECK(fs::exists(dir.path / "p.meta"));
    CHECK(slurp(dir.path / "p.csv").rfind("sx,sy,t\n", 0) == 0);
    const auto back = read_pattern(dir.path / "p.csv");
    CHECK(back == p);
    CHECK(read_window(KeyValues::load(sidecar_path(dir.path / "p.csv"))) == w);
  }

  TEST_CASE("malformed files") {
    TempDir dir("badpattern");
    std::ofstream(dir.path / "a.csv") << "x,y,t\n0.1,0.2,0.3\n";
    CHECK_THROWS(read_pattern(dir.path / "a.csv"));
    std::ofstream(dir.path / "b.csv") << "sx,sy,t\n0.1,0.2\n";
    CHECK_THROWS(read_pattern(dir.path / "b.csv"));
    std::ofstream(dir.path / "c.csv") << "sx,sy,t\n0.1,0.2,1.5\n";
    CHECK_THROWS(read_pattern(dir.path / "c.csv"));
    std::ofstream(dir.path / "d.csv") << "\"sx\",\"sy\",\"t\"\n0.1,0.2,0.5\n";
    CHECK(read_pattern(dir.path / "d.csv").size() == 1);
    CHECK_THROWS(read_pattern(dir.path / "missing.csv"));
  }
}

TEST_SUITE("cli") {
  TEST_CASE("simulate then estimate matches the in-memory pipeline bitwise") {
    TempDir dir("roundtrip");
    KeyValues cfg;
    cfg.set("scenario", "pcp1");
    cfg.set("seed", "7");
    cmd_simulate(cfg, dir.path / "p.csv");

    KeyValues est;
    est.set("corrections", "translation,border");
    est.set("statistics", "k,g");
    std::ostringstream from_file;
    cmd_estimate(dir.path / "p.csv", est, from_file);

    ProcessSpec s;
    s.family = Family::Pcp1;
    const auto p = s.simulate(STWindow::unit_cube(), 7);
    const auto lam = intensity_at_events(p, s.intensity(p.window()));
    const EvalGrid g = EvalGrid::default_grid();
    std::ostringstream direct;
    write_surface_csv(direct, k_hat(p, lam, EdgeCorrection::Translation, g), true);
    write_surface_csv(direct, k_hat(p, lam, EdgeCorrection::Border, g), false);
    write_surface_csv(direct, g_hat(p, lam, EdgeCorrection::Translation, g), false);
    write_surface_csv(direct, g_hat(p, lam, EdgeCorrection::Border, g), false);
    CHECK(from_file.str() == direct.str());
  }

  TEST_CASE("estimate on a far-separated pair") {
    TempDir dir("farpair");
    std::ofstream(dir.path / "two.csv") << "sx,sy,t\n0.1,0.1,0.3\n0.8,0.8,0.7\n";
    KeyValues cfg;
    cfg.set("corrections", "translation");
    cfg.set("statistics", "k");
    cfg.set("intensity", "kernel(0.3)");
    std::ostringstream out;
    cmd_estimate(dir.path / "two.csv", cfg, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      CHECK(line.find(",0,k,translation,kernel(0.3)") != std::string::npos);
    }
    CHECK(rows == 625);
    cfg.set("intensity", "true");
    CHECK_THROWS_AS(cmd_estimate(dir.path / "two.csv", cfg, out), ConfigError);
  }

  TEST_CASE("intensity command writes a model file") {
    TempDir dir("intensity");
    KeyValues cfg;
    cfg.set("scenario", "hpp");
    cfg.set("seed", "2");
    cmd_simulate(cfg, dir.path / "p.csv");
    KeyValues par;
    par.set("intensity", "parametric(1)");
    cmd_intensity(dir.path / "p.csv", par, dir.path / "m.txt");
    const auto m = KeyValues::load(dir.path / "m.txt");
    CHECK(*m.get("strategy") == "parametric(1)");
    CHECK(m.get("fit.iterations"));
    cmd_intensity(dir.path / "p.csv", {}, dir.path / "k.txt");
    CHECK(*KeyValues::load(dir.path / "k.txt").get("strategy") == "kernel(auto)");
  }

  TEST_CASE("mc output re-runs from its own meta file") {
    TempDir dir("mc");
    KeyValues cfg;
    cfg.set("scenario", "pcp1");
    cfg.set("n_sim", "4");
    cfg.set("statistics", "g");
    cmd_mc(cfg, dir.path / "a", 1);
    for (const char* f : {"report.csv", "deviations.csv", "power.csv", "efficiency.csv", "meta.txt"}) {
      CHECK(fs::exists(dir.path / "a" / f));
    }
    const auto meta = KeyValues::load(dir.path / "a" / "meta.txt");
    CHECK(meta.get("seed"));  // generated and echoed
    cmd_mc(meta, dir.path / "b", 2);
    for (const char* f : {"report.csv", "deviations.csv", "power.csv", "efficiency.csv", "meta.txt"}) {
      CHECK(slurp(dir.path / "a" / f) == slurp(dir.path / "b" / f));
    }
  }

  TEST_CASE("error codes") {
    CHECK(error_code(ConfigError("x")) == "usage");
    CHECK(error_code(ReplicationError(1, 2, false, "x")) == "replication");
    CHECK(error_code(std::invalid_argument("x")) == "invalid");
    CHECK(error_code(std::runtime_error("x")) == "runtime");
  }
}
