#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mvbandit/errors.hpp"
#include "mvbandit/experiment.hpp"
#include "mvbandit/plot.hpp"
#include "mvbandit/rng.hpp"
#include "mvbandit/sor.hpp"

using namespace mvbandit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig tiny_config(const std::string& out_dir) {
  RunConfig cfg;
  cfg.scenario = "I";
  cfg.S = 4;
  cfg.T = 600;
  cfg.checkpoints = 12;
  cfg.seeds.count = 3;
  cfg.output_dir = out_dir;
  return cfg;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& stem) {
    path = fs::temp_directory_path() / stem;
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("seed specs resolve derived or explicit seeds") {
  SeedSpec spec;
  spec.master = 271828;
  spec.count = 4;
  auto seeds = spec.resolve();
  REQUIRE(seeds.size() == 4);
  CHECK(seeds[0] == derive_seed(271828, 0));
  CHECK(seeds[3] == derive_seed(271828, 3));
  spec.explicit_seeds = {5, 6};
  auto expl = spec.resolve();
  REQUIRE(expl.size() == 2);
  CHECK(expl[0] == 5);
  CHECK(expl[1] == 6);
}

TEST_CASE("config json round trips through parse and dump") {
  nlohmann::json j = {
      {"scenario", "II"},
      {"S", 4},
      {"T", 5000},
      {"checkpoints", 40},
      {"seeds", {{"master", 99}, {"count", 7}}},
      {"jobs", 2},
      {"policies",
       {{{"variant", "RISE"}, {"name", "rise-a"}},
        {{"variant", "MV_UCB"}, {"rho", 1.5}}}},
  };
  RunConfig cfg = parse_run_config(j);
  CHECK(cfg.scenario == "II");
  CHECK(cfg.T == 5000);
  CHECK(cfg.checkpoints == 40);
  CHECK(cfg.seeds.master == 99);
  CHECK(cfg.seeds.count == 7);
  CHECK(cfg.jobs == 2);
  REQUIRE(cfg.policies.size() == 2);
  CHECK(cfg.policies[0].variant == PolicyVariant::RISE);
  CHECK(cfg.policies[0].name == "rise-a");
  CHECK(cfg.policies[1].variant == PolicyVariant::MV_UCB);
  CHECK(cfg.policies[1].rho == 1.5);

  nlohmann::json back = run_config_to_json(cfg);
  RunConfig again = parse_run_config(back);
  CHECK(again.scenario == cfg.scenario);
  CHECK(again.T == cfg.T);
  CHECK(again.policies.size() == cfg.policies.size());
}

TEST_CASE("unknown config keys are rejected") {
  CHECK_THROWS_AS(parse_run_config({{"scenrio", "I"}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"T", 100}, {"extra", 1}}), ConfigError);
  CHECK_THROWS_AS(
      parse_run_config({{"policies", {{{"variant", "RISE"}, {"wat", 2}}}}}),
      ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"seeds", {{"mster", 3}}}}), ConfigError);
}

TEST_CASE("presets select the figure setups") {
  RunConfig f1 = preset("fig1");
  CHECK(f1.scenario == "I");
  CHECK(f1.S == 4);
  CHECK(f1.T == 100000);
  CHECK(f1.seeds.count == 20);
  REQUIRE(f1.policies.size() == 4);
  RunConfig f4 = preset("fig4");
  CHECK(f4.scenario == "III");
  CHECK(f4.S == 8);
  CHECK_THROWS_AS(preset("fig5"), ConfigError);
}

TEST_CASE("validation names broken fields") {
  RunConfig cfg = tiny_config("unused");
  cfg.T = 5;
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  cfg = tiny_config("unused");
  cfg.scenario = "nope-not-a-file";
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  cfg = tiny_config("unused");
  cfg.jobs = 0;
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
  cfg = tiny_config("unused");
  cfg.seeds.count = 0;
  CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
}

TEST_CASE("experiment writes the three output files") {
  TempDir tmp("mvb_exp_basic");
  RunConfig cfg = tiny_config(tmp.path.string());
  ExperimentResult res = run_experiment(cfg);
  CHECK(fs::exists(res.per_seed_path));
  CHECK(fs::exists(res.aggregate_path));
  CHECK(fs::exists(res.metadata_path));
  REQUIRE(res.reports.size() == 4);  // standard policy set

  std::string agg = slurp(res.aggregate_path);
  CHECK(agg.rfind("policy,scenario,t,mean_regret,stderr,n_seeds", 0) == 0);
  std::string per = slurp(res.per_seed_path);
  CHECK(per.rfind("policy,scenario,seed,t,intermediate_regret", 0) == 0);

  // Aggregate rows: policies x checkpoints.
  const auto cps = log_checkpoints(cfg.T, cfg.checkpoints);
  int lines = 0;
  for (char c : agg)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + 4 * static_cast<int>(cps.size()));

  // Metadata carries the generator id, seeds, and config hash.
  nlohmann::json meta = nlohmann::json::parse(slurp(res.metadata_path));
  CHECK(meta.at("prng") == std::string(kRngId));
  CHECK(meta.at("seeds").size() == 3);
  CHECK(meta.at("config_hash").get<std::string>().size() == 16);
  CHECK(meta.at("version") == std::string(kVersion));
  CHECK(meta.contains("instance"));
  CHECK_FALSE(meta.contains("timestamp"));

  for (const RegretReport& rep : res.reports) {
    REQUIRE(rep.per_seed.size() == 3);
    REQUIRE(rep.mean.size() == cps.size());
    CHECK(rep.prng_id == std::string(kRngId));
    CHECK(rep.config_hash.size() == 16);
    for (double m : rep.mean) CHECK(m >= 0.0);
  }
}

TEST_CASE("parallel and serial runs produce identical bytes") {
  TempDir t1("mvb_exp_serial"), t2("mvb_exp_par");
  RunConfig cfg = tiny_config(t1.path.string());
  cfg.seeds.count = 4;
  run_experiment(cfg);
  RunConfig par = cfg;
  par.output_dir = t2.path.string();
  par.jobs = 4;
  run_experiment(par);
  CHECK(slurp((t1.path / "aggregate.csv").string()) ==
        slurp((t2.path / "aggregate.csv").string()));
  CHECK(slurp((t1.path / "per_seed.csv").string()) ==
        slurp((t2.path / "per_seed.csv").string()));
}

TEST_CASE("explicit seeds override the derived stream") {
  TempDir tmp("mvb_exp_seeds");
  RunConfig cfg = tiny_config(tmp.path.string());
  cfg.seeds.explicit_seeds = {111, 222};
  ExperimentResult res = run_experiment(cfg);
  nlohmann::json meta = nlohmann::json::parse(slurp(res.metadata_path));
  REQUIRE(meta.at("seeds").size() == 2);
  CHECK(meta.at("seeds")[0].get<std::uint64_t>() == 111);
  CHECK(meta.at("seeds")[1].get<std::uint64_t>() == 222);
  std::string per = slurp(res.per_seed_path);
  CHECK(per.find(",111,") != std::string::npos);
  CHECK(per.find(",222,") != std::string::npos);
}

TEST_CASE("custom instance files feed the harness") {
  TempDir tmp("mvb_exp_custom");
  fs::create_directories(tmp.path);
  MVInstance inst = to_instance(load_scenario("I"), 2);
  auto inst_path = (tmp.path / "inst.json").string();
  save_instance(inst, inst_path);
  RunConfig cfg = tiny_config((tmp.path / "out").string());
  cfg.scenario = inst_path;
  ExperimentResult res = run_experiment(cfg);
  nlohmann::json meta = nlohmann::json::parse(slurp(res.metadata_path));
  CHECK(meta.at("instance").at("K").get<int>() == 10);
}

TEST_CASE("design dump lands next to the other outputs") {
  TempDir tmp("mvb_exp_design");
  RunConfig cfg = tiny_config(tmp.path.string());
  cfg.dump_design = true;
  run_experiment(cfg);
  auto design_path = tmp.path / "design.json";
  REQUIRE(fs::exists(design_path));
  nlohmann::json dj = nlohmann::json::parse(slurp(design_path.string()));
  CHECK(dj.contains("support"));
  CHECK(dj.contains("weights"));
  double total = 0.0;
  for (const auto& w : dj.at("weights")) total += w.get<double>();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("plot renders an svg from the aggregate csv") {
  TempDir tmp("mvb_exp_plot");
  RunConfig cfg = tiny_config(tmp.path.string());
  ExperimentResult res = run_experiment(cfg);
  auto svg_path = (tmp.path / "curves.svg").string();
  plot_regret_csv(res.aggregate_path, svg_path, "tiny run");
  std::string svg = slurp(svg_path);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("tiny run") != std::string::npos);
  for (const char* name : {"RISE", "RISEPP", "MV_UCB", "MV_EXPEXP"})
    CHECK(svg.find(name) != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("plot rejects malformed csv naming the row") {
  TempDir tmp("mvb_exp_badcsv");
  fs::create_directories(tmp.path);
  auto bad = (tmp.path / "bad.csv").string();
  {
    std::ofstream out(bad);
    out << "policy,scenario,t,mean_regret,stderr,n_seeds\n";
    out << "RISE,s,10,1.0,0.1,3\n";
    out << "RISE,s,20,not_a_number\n";
  }
  try {
    plot_regret_csv(bad, (tmp.path / "x.svg").string());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  auto missing_header = (tmp.path / "hdr.csv").string();
  {
    std::ofstream out(missing_header);
    out << "a,b,c\n";
  }
  CHECK_THROWS_AS(
      plot_regret_csv(missing_header, (tmp.path / "y.svg").string()),
      ConfigError);
}
