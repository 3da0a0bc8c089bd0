#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "nlchns/cli.hpp"
#include "nlchns/io.hpp"

using namespace nlchns;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlchns_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Json make_config(const std::string& outdir) {
  Json j = Json::parse(R"({
    "grid": {"L": 6.283185307179586, "N": 16},
    "kernel": {"family": "periodized-gaussian", "width": 1.0, "mass": 5},
    "potential": {"family": "quartic", "coefficients": [1, 1]},
    "stepper": {"dt": 0.01, "nu1": 1, "nu2": 2},
    "forcing": {"kind": "steady", "amplitude": 0.5, "mx": 1, "my": 1},
    "initial": {"kind": "random", "phi_mean": 0.0, "phi_amplitude": 0.8, "velocity_amplitude": 0.5},
    "experiment": {"T": 0.1},
    "seed": 3
  })");
  j["output"] = {{"directory", outdir}};
  return j;
}

int run(const std::string& sub, const Json& cfg, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int rc = run_subcommand(sub, parse_config(cfg), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("snapshot layout and round trip") {
    const GridSpec g = testing::grid(8);
    FlowState z(g);
    z.phi = testing::trig_field(g, 1, 3, true);
    z.u = testing::solenoidal_field(g, 2, 3);
    z.t = 1.0 / 3.0;
    const auto bytes = snapshot_bytes(z);
    CHECK(bytes.size() == 1568);
    CHECK(std::string(bytes.data(), 7) == "NLCHNS1");
    CHECK(bytes[7] == '\0');
    const FlowState back = snapshot_from_bytes(bytes);
    CHECK(back == z);

    const fs::path dir = scratch("snap");
    write_snapshot((dir / "z.bin").string(), z);
    CHECK(fs::file_size(dir / "z.bin") == 1568);
    CHECK(read_snapshot((dir / "z.bin").string()) == z);

    auto truncated = bytes;
    truncated.resize(1500);
    CHECK_THROWS_AS(snapshot_from_bytes(truncated), IoError);
    auto bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(snapshot_from_bytes(bad), IoError);
    std::vector<char> tiny(bytes.begin(), bytes.begin() + 10);
    CHECK_THROWS_AS(snapshot_from_bytes(tiny), IoError);
  }

  TEST_CASE("ledger CSV round trip is exact") {
    std::vector<EnergyLedgerEntry> L;
    for (int i = 0; i < 5; ++i) L.push_back({0.1 * i, 1.0 / (i + 3), 0.3, 1e-17 * i, 2.0 / 7.0, 5.5, 6.25, -1.0 / 9.0, 3.141592653589793});
    const fs::path dir = scratch("ledger");
    write_ledger_csv((dir / "l.csv").string(), L);
    const std::string text = slurp(dir / "l.csv");
    CHECK(text.rfind(std::string("# nlchns ") + kVersion + "\nt,E,kinetic,nonlocal,potential,visc_dissipation,mu_dissipation,forcing_power,mass\n", 0) == 0);
    const auto back = read_ledger_csv((dir / "l.csv").string());
    REQUIRE(back.size() == L.size());
    for (std::size_t i = 0; i < L.size(); ++i) {
      CHECK(back[i].t == L[i].t);
      CHECK(back[i].E == L[i].E);
      CHECK(back[i].forcing_power == L[i].forcing_power);
      CHECK(back[i].mass == L[i].mass);
    }
  }

  TEST_CASE("signal CSV round trip") {
    const SampledSignal s = SampledSignal::sample(0.5, 0.25, 9, [](double t) { return t * t / 3.0; });
    const fs::path dir = scratch("signal");
    write_signal_csv((dir / "s.csv").string(), s);
    const SampledSignal b = read_signal_csv((dir / "s.csv").string());
    CHECK(b.t0 == s.t0);
    CHECK(b.dt == s.dt);
    CHECK(b.values == s.values);
    std::ofstream(dir / "bad.csv") << "t,value\n0,1\n1,2\n3,4\n";
    CHECK_THROWS_AS(read_signal_csv((dir / "bad.csv").string()), IoError);
  }
}

TEST_SUITE("config") {
  TEST_CASE("parse, serialize, parse") {
    const RunConfig c = parse_config(make_config("out"));
    const Json j = to_json(c);
    const RunConfig c2 = parse_config(j);
    CHECK(to_json(c2) == j);
    CHECK(c2.grid == c.grid);
    CHECK(c2.stepper->forcing.amplitude == 0.5);
    CHECK(c2.seed == 3);
    const Json orig = make_config("out");
    for (const auto& [k, v] : orig.items()) CHECK(j.contains(k));
  }

  TEST_CASE("unknown keys are rejected at every level") {
    Json j = make_config("out");
    j["extra"] = 1;
    CHECK_THROWS_AS(parse_config(j), ValidationError);
    j = make_config("out");
    j["grid"]["M"] = 3;
    CHECK_THROWS_AS(parse_config(j), ValidationError);
    j = make_config("out");
    j["experiment"]["dt"] = 3;
    CHECK_THROWS_AS(simulate_experiment(parse_config(j)), ValidationError);
  }

  TEST_CASE("physical parameters have no defaults") {
    for (auto [block, key] : std::vector<std::pair<std::string, std::string>>{
             {"grid", "N"}, {"grid", "L"}, {"kernel", "mass"}, {"stepper", "nu1"}, {"stepper", "nu2"}, {"stepper", "dt"}}) {
      Json j = make_config("out");
      j[block].erase(key);
      CHECK_THROWS_AS(parse_config(j), ValidationError);
    }
    CHECK_THROWS_AS(parse_config_text("{ not json"), ValidationError);
  }

  TEST_CASE("experiment blocks") {
    Json j = make_config("out");
    j["experiment"] = {{"T", 2.0}, {"mass_bound", 0.0}, {"energy_targets", {1e4, 2e4}}, {"threads", 2}};
    const AttractorExperiment a = attractor_experiment(parse_config(j));
    CHECK(a.energy_targets.size() == 2);
    CHECK(a.threads == 2);
    j["experiment"] = {{"T", 1.0}, {"mode", "bounded-fd"}, {"velocity", "cellular"}, {"velocity_amplitude", 1.0}};
    CHECK(ch_experiment(parse_config(j)).mode == ChMode::BoundedFd);
    j["experiment"] = {{"T", 1.0}, {"mode", "bounded-fd"}, {"velocity", "swirl"}};
    CHECK_THROWS_AS(ch_experiment(parse_config(j)), ValidationError);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("simulate writes artifacts and is deterministic") {
    const fs::path a = scratch("sim_a"), b = scratch("sim_b");
    CHECK(run("simulate", make_config(a.string())) == kExitOk);
    CHECK(run("simulate", make_config(b.string())) == kExitOk);
    CHECK(slurp(a / "ledger.csv") == slurp(b / "ledger.csv"));
    CHECK(fs::exists(a / "final.nlchns"));
    const auto L = read_ledger_csv((a / "ledger.csv").string());
    CHECK(L.size() == 11);
  }

  TEST_CASE("zero steps leaves a single ledger row") {
    const fs::path a = scratch("sim_zero");
    Json j = make_config(a.string());
    j["experiment"]["T"] = 0.0;
    CHECK(run("simulate", j) == kExitOk);
    CHECK(read_ledger_csv((a / "ledger.csv").string()).size() == 1);
  }

  TEST_CASE("CFL violation at t = 0 exits with status 2 before stepping") {
    const fs::path a = scratch("sim_cfl");
    Json j = make_config(a.string());
    j["stepper"]["dt"] = 0.5;
    std::string err;
    CHECK(run("simulate", j, nullptr, &err) == kExitValidation);
    CHECK(!fs::exists(a / "ledger.csv"));
    const Json e = Json::parse(err);
    CHECK(e["error"] == "validation");
  }

  TEST_CASE("blow-up exits with status 3 and flushes the partial ledger") {
    const fs::path a = scratch("sim_blow");
    Json j = make_config(a.string());
    j["stepper"]["dt"] = 0.05;
    j["stepper"]["cfl_limit"] = 10.0;
    j["initial"]["velocity_amplitude"] = 30.0;
    j["forcing"]["amplitude"] = 2000.0;
    j["experiment"]["T"] = 50.0;
    std::string err;
    const int rc = run("simulate", j, nullptr, &err);
    CHECK(rc == kExitAborted);
    CHECK(Json::parse(err)["error"] == "numerical_abort");
    CHECK(fs::exists(a / "ledger.csv"));
    CHECK(read_ledger_csv((a / "ledger.csv").string()).size() >= 1);
  }

  TEST_CASE("check-assumptions on the default configuration") {
    const fs::path a = scratch("assume");
    Json j = make_config(a.string());
    j["experiment"] = Json::object();
    std::string out;
    CHECK(run("check-assumptions", j, &out) == kExitOk);
    CHECK(out.find("c0=1\n") != std::string::npos);
    j["kernel"]["mass"] = 1.0;
    CHECK(run("check-assumptions", j) == kExitValidation);
  }

  TEST_CASE("gronwall-verify, ch-only and contraction-test") {
    const fs::path a = scratch("misc");
    write_signal_csv((a / "theta.csv").string(), SampledSignal::sample(0.0, 0.01, 301, [](double t) { return std::exp(-0.5 * t); }));
    write_signal_csv((a / "f.csv").string(), SampledSignal::sample(0.0, 0.01, 301, [](double) { return 0.0; }));
    Json j = make_config(a.string());
    j["experiment"] = {{"theta", (a / "theta.csv").string()}, {"f", (a / "f.csv").string()}, {"k", 0.5}, {"rel_tol", 1e-4}};
    std::string out;
    CHECK(run("gronwall-verify", j, &out) == kExitOk);
    CHECK(out.find("holds=true") != std::string::npos);

    j["experiment"] = {{"T", 0.2}, {"mode", "bounded-fd"}, {"velocity", "cellular"}, {"velocity_amplitude", 1.0}};
    CHECK(run("ch-only", j) == kExitOk);
    CHECK(fs::exists(a / "ch_ledger.csv"));

    j["experiment"] = {{"T", 0.2}, {"delta_norm", 1e-6}, {"velocity_amplitude", 1.0}, {"phi_amplitude", 0.7}};
    CHECK(run("contraction-test", j, &out) == kExitOk);
    CHECK(out.find("passed=true") != std::string::npos);
    CHECK(fs::exists(a / "contraction.csv"));
  }

  TEST_CASE("the installed binary reports exit codes") {
    const fs::path a = scratch("binary");
    Json j = make_config(a.string());
    std::ofstream(a / "ok.json") << j.dump();
    j["stepper"]["dt"] = 0.5;
    std::ofstream(a / "cfl.json") << j.dump();
    std::ofstream(a / "broken.json") << "{";
    const std::string bin = NLCHNS_CLI;
    auto status = [&](const std::string& args) {
      const int s = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
      return WEXITSTATUS(s);
    };
    CHECK(status("simulate -c " + (a / "ok.json").string()) == 0);
    CHECK(status("simulate -c " + (a / "cfl.json").string()) == 2);
    CHECK(status("simulate -c " + (a / "broken.json").string()) == 2);
    CHECK(status("simulate") == 2);
    CHECK(status("nonsense -c x") == 2);
  }
}
