#include <catch2/catch_amalgamated.hpp>

#include <duet/scenarios.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace duet;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / "duet_cli_tests";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  REQUIRE(f.good());
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// runs the installed binary; returns 0 on success, nonzero otherwise
int run_cli(const std::string& args, const fs::path& errfile) {
  std::string cmd = std::string(DUET_CLI_PATH) + " " + args + " 2> '" +
                    errfile.string() + "'";
  return std::system(cmd.c_str());
}

struct Csv {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> info;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::pair<std::string, std::string> split_kv(const std::string& s) {
  auto eq = s.find('=');
  REQUIRE(eq != std::string::npos);
  auto trim = [](std::string t) {
    while (!t.empty() && t.front() == ' ') t.erase(t.begin());
    while (!t.empty() && (t.back() == ' ' || t.back() == '\r')) t.pop_back();
    return t;
  };
  return {trim(s.substr(0, eq)), trim(s.substr(eq + 1))};
}

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream in(text);
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("## ", 0) == 0) {
      c.info.push_back(split_kv(line.substr(3)));
      continue;
    }
    if (line.rfind("# ", 0) == 0) {
      c.config.push_back(split_kv(line.substr(2)));
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (!header_done) {
      c.columns = cells;
      header_done = true;
      continue;
    }
    std::vector<double> vals;
    for (const auto& s : cells) vals.push_back(std::stod(s));
    REQUIRE(vals.size() == c.columns.size());
    c.rows.push_back(std::move(vals));
  }
  return c;
}

double cell(const Csv& c, std::size_t row, const std::string& col) {
  for (std::size_t i = 0; i < c.columns.size(); ++i)
    if (c.columns[i] == col) return c.rows.at(row).at(i);
  FAIL("no column " + col);
  return 0.0;
}

std::string config_value(const Csv& c, const std::string& key) {
  for (const auto& [k, v] : c.config)
    if (k == key) return v;
  return "";
}

std::string info_value(const Csv& c, const std::string& key) {
  for (const auto& [k, v] : c.info)
    if (k == key) return v;
  return "";
}

}  // namespace

TEST_CASE("population scenario emits the contracted pair of tables") {
  fs::path dir = work_dir();
  fs::path cfg = dir / "fig2.conf";
  fs::path out = dir / "fig2.csv";
  // coarser steps than the default keep this smoke test quick
  write_file(cfg, "scenario = fig2\nout = " + out.string() +
                      "\ndt_factor = 60\n");
  REQUIRE(run_cli("run --config '" + cfg.string() + "'",
                  dir / "fig2.err") == 0);

  std::string text = read_file(out);
  REQUIRE(text.find("\nt,P1_full,P2_full,P1_eff,P2_eff\n") !=
          std::string::npos);
  Csv c = parse_csv(text);
  REQUIRE(c.columns ==
          std::vector<std::string>{"t", "P1_full", "P2_full", "P1_eff",
                                   "P2_eff"});
  REQUIRE(c.rows.size() == 241);
  for (const auto& r : c.rows) {
    CHECK(r[1] + r[2] <= 1.0 + 1e-9);
    CHECK(r[3] + r[4] == Catch::Approx(1.0).margin(1e-12));
  }

  // companion file at doubled detuning, same shape
  fs::path far = dir / "fig2_delta200.csv";
  REQUIRE(fs::exists(far));
  Csv c2 = parse_csv(read_file(far));
  CHECK(c2.columns == c.columns);
  CHECK(config_value(c2, "Delta") == "200");

  // the metadata block re-parses into the exact same resolved config
  std::string echo;
  for (const auto& [k, v] : c.config) echo += k + " = " + v + "\n";
  ScenarioConfig round = parse_config(echo);
  CHECK(serialize_config(round) == c.config);
}

TEST_CASE("reruns of one config are byte-identical") {
  fs::path dir = work_dir();
  fs::path cfg = dir / "synth.conf";
  fs::path out = dir / "synth.csv";
  write_file(cfg, "scenario = synth\ntarget = random\nn = 2\nseed = 9\nout = " +
                      out.string() + "\n");
  REQUIRE(run_cli("run --config '" + cfg.string() + "'", dir / "s1.err") == 0);
  std::string first = read_file(out);
  REQUIRE(run_cli("run --config '" + cfg.string() + "'", dir / "s2.err") == 0);
  CHECK(first == read_file(out));

  Csv c = parse_csv(first);
  REQUIRE(c.rows.size() >= 2);
  CHECK(cell(c, c.rows.size() - 1, "kind") == 9.0);
  CHECK(cell(c, c.rows.size() - 1, "fidelity") >= 1.0 - 1e-6);
}

TEST_CASE("the vacuum target lists no pulses and scores one") {
  fs::path dir = work_dir();
  fs::path cfg = dir / "vac.conf";
  fs::path out = dir / "vac.csv";
  write_file(cfg,
             "scenario = synth\ntarget = vacuum\nout = " + out.string() + "\n");
  REQUIRE(run_cli("run --config '" + cfg.string() + "'", dir / "vac.err") == 0);
  Csv c = parse_csv(read_file(out));
  REQUIRE(c.rows.size() == 1);  // only the summary row
  CHECK(cell(c, 0, "kind") == 9.0);
  CHECK(cell(c, 0, "duration") == 0.0);
  CHECK(cell(c, 0, "fidelity") == 1.0);
}

TEST_CASE("config mistakes come back as messages, not tables") {
  fs::path dir = work_dir();
  auto expect_error = [&](const std::string& name, const std::string& body,
                          const std::string& needle) {
    fs::path cfg = dir / (name + ".conf");
    fs::path err = dir / (name + ".err");
    write_file(cfg, body);
    REQUIRE(run_cli("run --config '" + cfg.string() + "'", err) != 0);
    std::string text = read_file(err);
    INFO(text);
    CHECK(text.find(needle) != std::string::npos);
  };
  expect_error("empty", "", "scenario missing");
  expect_error("typo", "scnario = fig2\n", "unknown key 'scnario'");
  expect_error("badnum", "scenario = noon\nn = two\n", "key 'n'");
  expect_error("dup", "scenario = noon\nseed = 1\nseed = 2\n",
               "duplicate key 'seed'");
  expect_error("badscen", "scenario = bogus\n", "unknown scenario");
  expect_error("badsweep",
               "scenario = fig2\nsweep_param = t\nsweep_min = 0\n"
               "sweep_max = 1\nsweep_count = 4\n",
               "invalid sweep");
  expect_error("axis",
               "scenario = noon\nsweep_param = Delta\nsweep_min = 1\n"
               "sweep_max = 2\nsweep_count = 2\n",
               "invalid sweep");
  expect_error("nowrite",
               "scenario = synth\ntarget = vacuum\nout = " +
                   (dir / "missing_dir" / "x.csv").string() + "\n",
               "cannot write");

  fs::path err = dir / "noconf.err";
  REQUIRE(run_cli("run --config '" + (dir / "absent.conf").string() + "'",
                  err) != 0);
  CHECK(read_file(err).find("cannot read") != std::string::npos);
}

TEST_CASE("command-line flags override the document") {
  fs::path dir = work_dir();
  fs::path cfg = dir / "base.conf";
  fs::path out = dir / "flags.csv";
  write_file(cfg,
             "scenario = synth\ntarget = vacuum\nsweep_param = N\n"
             "sweep_min = 1\nsweep_max = 2\nsweep_count = 2\n");
  REQUIRE(run_cli("run --config '" + cfg.string() + "' --scenario noon --out '" +
                      out.string() + "' --seed 3 --delta-over-g 120",
                  dir / "flags.err") == 0);
  Csv c = parse_csv(read_file(out));
  CHECK(config_value(c, "scenario") == "noon");
  CHECK(config_value(c, "seed") == "3");
  CHECK(config_value(c, "Delta") == "120");

  REQUIRE(c.columns ==
          std::vector<std::string>{"N", "fidelity_shortcut",
                                   "fidelity_synthesized", "time_shortcut",
                                   "time_formula"});
  REQUIRE(c.rows.size() == 2);
  CHECK(cell(c, 0, "N") == 1.0);
  CHECK(cell(c, 0, "fidelity_shortcut") >= 1.0 - 1e-9);
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    CHECK(cell(c, r, "fidelity_shortcut") <=
          cell(c, r, "fidelity_synthesized") + 1e-9);
    CHECK(cell(c, r, "time_shortcut") > 0.0);
    CHECK(cell(c, r, "time_formula") > 0.0);
  }
}

TEST_CASE("driven-displacement rows follow the prediction columns") {
  fs::path dir = work_dir();
  fs::path cfg = dir / "ecs.conf";
  fs::path out = dir / "ecs.csv";
  double period = 2.0 * pi / 10.0;
  write_file(cfg, "scenario = ecs\nout = " + out.string() +
                      "\nsweep_param = t\nsweep_min = " +
                      format_real(period / 8.0) +
                      "\nsweep_max = " + format_real(period / 2.0) +
                      "\nsweep_count = 3\n");
  REQUIRE(run_cli("run --config '" + cfg.string() + "'", dir / "ecs.err") == 0);
  Csv c = parse_csv(read_file(out));
  REQUIRE(c.rows.size() == 3);
  for (std::size_t r = 0; r < c.rows.size(); ++r) {
    double dre = cell(c, r, "re_b1_plus") + cell(c, r, "re_alpha");
    double dim = cell(c, r, "im_b1_plus") + cell(c, r, "im_alpha");
    CHECK(std::hypot(dre, dim) <= 2e-3);
    CHECK(cell(c, r, "fidelity_plus") >= 0.99);
    CHECK(cell(c, r, "fidelity_plus") <= 1.0 + 1e-9);
  }
}

TEST_CASE("agreement with the reduced model improves with detuning") {
  fs::path dir = work_dir();
  fs::path cfg = dir / "fig4b.conf";
  fs::path out = dir / "fig4b.csv";
  write_file(cfg, "scenario = fig4b\nout = " + out.string() +
                      "\nsweep_param = Delta\nsweep_min = 60\n"
                      "sweep_max = 200\nsweep_count = 2\n");
  REQUIRE(run_cli("run --config '" + cfg.string() + "'",
                  dir / "fig4b.err") == 0);
  Csv c = parse_csv(read_file(out));
  REQUIRE(c.rows.size() == 2);
  CHECK(cell(c, 0, "delta_over_g") == 60.0);
  CHECK(cell(c, 1, "delta_over_g") == 200.0);
  CHECK(cell(c, 0, "fidelity") >= 0.90);
  CHECK(cell(c, 1, "fidelity") > cell(c, 0, "fidelity"));
  CHECK(cell(c, 1, "fidelity") <= 1.0 + 1e-9);
}

TEST_CASE("fidelity is flat in the rotation drive amplitude") {
  fs::path dir = work_dir();
  fs::path cfg = dir / "fig4a.conf";
  fs::path out = dir / "fig4a.csv";
  write_file(cfg, "scenario = fig4a\nout = " + out.string() +
                      "\nsweep_param = Omega\nsweep_min = 1\n"
                      "sweep_max = 5\nsweep_count = 3\n");
  REQUIRE(run_cli("run --config '" + cfg.string() + "'",
                  dir / "fig4a.err") == 0);
  Csv c = parse_csv(read_file(out));
  REQUIRE(c.columns == std::vector<std::string>{"omega_over_g", "fidelity"});
  REQUIRE(c.rows.size() == 3);
  CHECK(cell(c, 0, "omega_over_g") == 1.0);
  CHECK(cell(c, 2, "omega_over_g") == 5.0);
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    double f = cell(c, i, "fidelity");
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  CHECK(lo >= 0.95);
  CHECK(hi <= 1.0 + 1e-9);
  CHECK(hi - lo <= 0.02);
  // the detuning-quality factor rides along in the metadata
  double agree = std::stod(info_value(c, "bus_agreement"));
  CHECK(agree >= 0.99);
  CHECK(agree <= 1.0 + 1e-9);
}

TEST_CASE("the split bus operator matches the reference Hamiltonian") {
  SystemParams p;
  HilbertSpace space{2, 3, 3};
  Matrix v = bus_coupling(p, space);
  for (double t : {0.0, 0.37, 1.9}) {
    Matrix fast = std::exp(iu * p.Delta * t) * v;
    fast += fast.adjoint().eval();
    CHECK((fast - full_hamiltonian(p, t, space)).norm() <= 1e-12);
  }
}

TEST_CASE("table rendering guards its shape") {
  ResultTable t;
  CHECK_THROWS_AS(render_csv(t), std::invalid_argument);
  t.columns = {"a", "b"};
  t.rows.push_back({1.0});
  CHECK_THROWS_AS(render_csv(t), std::invalid_argument);
  t.rows[0].push_back(0.1);
  std::string body = render_csv(t);
  CHECK(body == "a,b\n1,0.10000000000000001\n");
  CHECK(std::stod(format_real(0.1)) == 0.1);
}
