#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "test_helpers.hpp"

using test_util::close_rel;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("vacred_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args, const fs::path& workdir = scratch_dir()) {
  static int counter = 0;
  const fs::path out = scratch_dir() / ("stdout_" + std::to_string(counter) + ".txt");
  const fs::path err = scratch_dir() / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = "cd '" + workdir.string() + "' && '" + VACRED_CLI_PATH + "' " +
                          args + " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

struct Table {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  std::optional<double> cell(std::size_t row, const std::string& column) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == column) {
        return rows.at(row).at(c);
      }
    }
    FAIL("no column named " << column);
    return std::nullopt;
  }
};

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find(" = ");
      REQUIRE(eq != std::string::npos);
      t.metadata[line.substr(2, eq - 2)] = line.substr(eq + 3);
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field += ch;
      }
    }
    fields.push_back(field);
    if (!header_done) {
      t.columns = fields;
      header_done = true;
    } else {
      std::vector<std::optional<double>> row;
      for (const auto& f : fields) {
        if (f.empty()) {
          row.push_back(std::nullopt);
        } else {
          row.push_back(std::stod(f));
        }
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

}  // namespace

TEST_CASE("rc-now reproduces the published endpoint") {
  const CliResult r = run_cli("rc-now");
  REQUIRE(r.exit_code == 0);
  const Table t = parse_csv(r.out);
  REQUIRE(t.rows.size() == 1);
  CHECK(close_rel(*t.cell(0, "rc_cm"), 1.0601974787334538e-5, 1e-12));
  CHECK(*t.cell(0, "cross_check_rel") < 1e-12);
  CHECK(t.metadata.at("tool") == "vacred");
  CHECK(t.metadata.at("order_of_magnitude") == "true");
  CHECK(t.metadata.count("rng") == 1);
  CHECK(t.metadata.count("seed") == 1);
  // human summary goes to stderr when the payload is on stdout
  CHECK(r.err.find("R_c(t0)") != std::string::npos);
}

TEST_CASE("rc-now degenerate and rescaled cases") {
  const CliResult nodecay = run_cli("rc-now --delta 0");
  CHECK(nodecay.exit_code == 3);
  CHECK(nodecay.err.find("error: NO_DECAY:") != std::string::npos);

  const CliResult electron = run_cli("rc-now --mass-gev 0.000511");
  REQUIRE(electron.exit_code == 0);
  CHECK(close_rel(*parse_csv(electron.out).cell(0, "rc_cm"), 3.02986383073728e-6, 1e-12));
}

TEST_CASE("config file parsing, overrides, and errors") {
  const fs::path good = scratch_dir() / "good.cfg";
  {
    std::ofstream f(good);
    f << "# comment line\n";
    f << "delta = 0.16\n";
    f << "mass_gev = 0.5  # trailing comment\n";
    f << "\n";
  }
  const CliResult from_file = run_cli("rc-now --config '" + good.string() + "'");
  REQUIRE(from_file.exit_code == 0);
  Table t = parse_csv(from_file.out);
  CHECK(*t.cell(0, "delta") == 0.16);
  CHECK(*t.cell(0, "mass_gev") == 0.5);

  // flags override file values
  const CliResult overridden =
      run_cli("rc-now --config '" + good.string() + "' --delta 0.06");
  t = parse_csv(overridden.out);
  CHECK(*t.cell(0, "delta") == 0.06);
  CHECK(*t.cell(0, "mass_gev") == 0.5);

  const fs::path bad = scratch_dir() / "bad.cfg";
  {
    std::ofstream f(bad);
    f << "delta = 0.06\n";
    f << "unknown_thing = 1\n";
  }
  const CliResult unknown = run_cli("rc-now --config '" + bad.string() + "'");
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.err.find("error: CONFIG:") != std::string::npos);
  CHECK(unknown.err.find(":2") != std::string::npos);
  CHECK(unknown.err.find("unknown key 'unknown_thing'") != std::string::npos);

  const fs::path badval = scratch_dir() / "badval.cfg";
  {
    std::ofstream f(badval);
    f << "delta = banana\n";
  }
  CHECK(run_cli("rc-now --config '" + badval.string() + "'").exit_code == 2);

  CHECK(run_cli("rc-now --config '/nonexistent/file.cfg'").exit_code == 2);
  CHECK(run_cli("rc-now --no-such-flag 1").exit_code == 2);
  CHECK(run_cli("rc-now --format yaml").exit_code == 2);
}

TEST_CASE("evolve emits a monotone scale history consistent with rc-now") {
  const CliResult r = run_cli("evolve");
  REQUIRE(r.exit_code == 0);
  const Table t = parse_csv(r.out);
  REQUIRE(t.rows.size() == 64);
  CHECK(std::stod(t.metadata.at("max_continuity_residual")) < 1e-10);

  double prev_vc = 0.0;
  std::optional<std::size_t> anchor;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double vc = *t.cell(i, "vc_gev3");
    CHECK(vc > prev_vc);
    prev_vc = vc;
    if (*t.cell(i, "a") == 1.0) {
      anchor = i;
    }
  }
  REQUIRE(anchor.has_value());
  // t pins to zero at the snapped a0 sample, up to integrator tolerance
  const double t_span = std::abs(*t.cell(t.rows.size() - 1, "t_gev"));
  CHECK(std::abs(*t.cell(*anchor, "t_gev")) <= 1e-6 * t_span);
  const CliResult now = run_cli("rc-now");
  const Table tn = parse_csv(now.out);
  CHECK(close_rel(*t.cell(*anchor, "rc_cm"), *tn.cell(0, "rc_cm"), 1e-9));

  CHECK(run_cli("evolve --delta 0.16").exit_code == 0);
  CHECK(run_cli("evolve --a-start 2 --a-end 1").exit_code == 3);
}

TEST_CASE("evolve with a frozen vacuum leaves the scale columns empty") {
  const CliResult r = run_cli("evolve --delta 0 --n-samples 8");
  REQUIRE(r.exit_code == 0);
  const Table t = parse_csv(r.out);
  CHECK(t.metadata.at("no_decay") == "true");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK_FALSE(t.cell(i, "vc_gev3").has_value());
    CHECK_FALSE(t.cell(i, "rc_cm").has_value());
    CHECK(t.cell(i, "h_gev").has_value());
  }
}

TEST_CASE("mc-verify passes, is deterministic, and respects the kick budget") {
  const std::string small = "mc-verify --n-traj 400 --n-steps 200 --out out.csv";
  const fs::path d1 = scratch_dir() / "d1";
  const fs::path d2 = scratch_dir() / "d2";
  fs::create_directories(d1);
  fs::create_directories(d2);

  const CliResult r1 = run_cli(small + " --threads 1", d1);
  REQUIRE(r1.exit_code == 0);
  const Table t = parse_csv(read_file(d1 / "out.csv"));
  CHECK(t.metadata.at("verdict") == "PASS");
  REQUIRE(t.rows.size() == 201);
  CHECK(*t.cell(0, "msv") == 0.0);
  CHECK(*t.cell(200, "analytic") == doctest::Approx(2.0).epsilon(1e-12));

  // identical bytes for the same seed, any parallelism
  const CliResult r2 = run_cli(small + " --threads 2", d2);
  REQUIRE(r2.exit_code == 0);
  CHECK(read_file(d1 / "out.csv") == read_file(d2 / "out.csv"));

  // a different seed changes the payload
  const CliResult r3 = run_cli(small + " --seed 1", d2);
  REQUIRE(r3.exit_code == 0);
  CHECK(read_file(d1 / "out.csv") != read_file(d2 / "out.csv"));

  const CliResult starved = run_cli("mc-verify --n-traj 1");
  CHECK(starved.exit_code == 1);
  CHECK(starved.err.find("INSUFFICIENT_STATS") != std::string::npos);

  const CliResult capped = run_cli("mc-verify --n-traj 200000 --n-steps 200000");
  CHECK(capped.exit_code == 5);
  CHECK(capped.err.find("error: CONFIG_LIMIT:") != std::string::npos);
}

TEST_CASE("mc-verify driven by the evolved volume history") {
  const CliResult r =
      run_cli("mc-verify --vc-profile from-evolve --n-traj 1000 --n-steps 300");
  REQUIRE(r.exit_code == 0);
  const Table t = parse_csv(r.out);
  CHECK(t.metadata.at("verdict") == "PASS");
  CHECK(t.metadata.at("vc_profile") == "from-evolve");
  CHECK(std::stod(t.metadata.at("profile_v_ref_gev3")) > 0.0);

  CHECK(run_cli("mc-verify --vc-profile bogus").exit_code == 2);
}

TEST_CASE("sweep fits the exact scaling exponents") {
  const CliResult mass = run_cli("sweep --axis mass --grid 0.000511,0.938,10");
  REQUIRE(mass.exit_code == 0);
  const Table tm = parse_csv(mass.out);
  REQUIRE(tm.rows.size() == 3);
  CHECK(std::abs(std::stod(tm.metadata.at("fit_loglog_slope_rc")) - 1.0 / 6.0) < 1e-10);
  CHECK(std::abs(std::stod(tm.metadata.at("fit_loglog_slope_tdec")) + 11.0 / 6.0) < 1e-10);

  const CliResult h0 = run_cli("sweep --axis h0 --grid 3.845e-43,7.69e-43,1.538e-42");
  REQUIRE(h0.exit_code == 0);
  CHECK(std::abs(std::stod(parse_csv(h0.out).metadata.at("fit_loglog_slope_rc")) + 0.5) <
        1e-10);

  const CliResult delta = run_cli("sweep --axis delta --grid 0.02,0.06,0.16");
  REQUIRE(delta.exit_code == 0);
  const Table td = parse_csv(delta.out);
  CHECK(*td.cell(0, "rc_cm") > *td.cell(1, "rc_cm"));
  CHECK(*td.cell(1, "rc_cm") > *td.cell(2, "rc_cm"));

  CHECK(run_cli("sweep --axis bogus --grid 1,2").exit_code == 2);
  CHECK(run_cli("sweep --axis mass --grid 1").exit_code == 2);
  CHECK(run_cli("sweep --axis mass --grid -1,2").exit_code == 2);
  CHECK(run_cli("sweep --axis mass").exit_code == 2);  // --grid required
}

TEST_CASE("consistency check verdicts") {
  const CliResult ok = run_cli("consistency");
  REQUIRE(ok.exit_code == 0);
  const Table t = parse_csv(ok.out);
  CHECK(close_rel(*t.cell(0, "filling_fraction"), 5.213761944976481e-22, 1e-9));
  CHECK(*t.cell(0, "max_continuity_residual") < 1e-10);
  CHECK(t.metadata.at("verdict") == "PASS");

  const CliResult absurd = run_cli("consistency --dark-mass-gev 1e-50");
  CHECK(absurd.exit_code == 1);
  CHECK(parse_csv(absurd.out).metadata.at("verdict") == "FAIL");
}

TEST_CASE("csv and json payloads carry identical values") {
  const CliResult csv = run_cli("rc-now");
  const CliResult json = run_cli("rc-now --format json");
  REQUIRE(csv.exit_code == 0);
  REQUIRE(json.exit_code == 0);

  const Table t = parse_csv(csv.out);
  const nlohmann::json j = nlohmann::json::parse(json.out);
  REQUIRE(j.at("columns").size() == t.columns.size());
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    CHECK(j.at("columns").at(c).get<std::string>() == t.columns[c]);
    const double via_json = j.at("rows").at(0).at(c).get<double>();
    CHECK(via_json == *t.rows.at(0).at(c));  // exact after 17-digit round trip
  }
  CHECK(j.at("metadata").at("format") == "json");
  CHECK_FALSE(j.at("metadata").contains("verdict"));  // absent for rc-now
}

TEST_CASE("json nulls mirror empty csv cells") {
  const CliResult r = run_cli("evolve --delta 0 --n-samples 4 --format json");
  REQUIRE(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  bool saw_null = false;
  for (const auto& row : j.at("rows")) {
    if (row.back().is_null()) {
      saw_null = true;
    }
  }
  CHECK(saw_null);
}

TEST_CASE("outputs are reproducible from their own metadata block") {
  const fs::path d1 = scratch_dir() / "meta1";
  const fs::path d2 = scratch_dir() / "meta2";
  fs::create_directories(d1);
  fs::create_directories(d2);
  const CliResult first =
      run_cli("mc-verify --n-traj 300 --n-steps 150 --seed 77 --out out.csv", d1);
  REQUIRE(first.exit_code == 0);
  const std::string original = read_file(d1 / "out.csv");
  const Table t = parse_csv(original);

  // rebuild the command line from the echoed configuration
  std::string args = "mc-verify";
  for (const char* key : {"h0_gev", "omega_d0", "omega_b0", "omega_vac0", "delta",
                          "mass_gev", "a_start", "a_end", "n_samples", "n_traj",
                          "n_steps", "dt", "seed", "out_path", "format"}) {
    std::string flag = key;
    for (auto& ch : flag) {
      if (ch == '_') {
        ch = '-';
      }
    }
    if (std::string(key) == "out_path") {
      args += " --out " + t.metadata.at(key);
    } else {
      args += " --" + flag + " " + t.metadata.at(key);
    }
  }
  args += " --vc-const " + t.metadata.at("vc_const");

  const CliResult second = run_cli(args, d2);
  REQUIRE(second.exit_code == 0);
  CHECK(read_file(d2 / "out.csv") == original);
}
