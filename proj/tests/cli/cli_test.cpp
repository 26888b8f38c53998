#include <doctest.h>

#include <filesystem>
#include <string>

#include "pdm/serialize.hpp"
#include "process.hpp"

namespace fs = std::filesystem;
using testproc::quote;
using testproc::run;
using testproc::slurp;

namespace {

const std::string kCli = PDM_CLI_PATH;
const std::string kData = PDM_DATA_DIR;

int cli(const std::string& args) { return run(quote(kCli) + " " + args + " >/dev/null 2>&1"); }

std::string data(const char* name) { return quote(kData + "/" + name); }

}  // namespace

TEST_CASE("noiseless synth output ingests without drops") {
  const auto dir = testproc::scratch("cli_synth");
  testproc::spit(dir / "plan.json", R"({"trace":{"noise_sigma_kpa":0}})");
  REQUIRE(cli("synth --seed 1 --config " + quote((dir / "plan.json").string()) + " --out-dir " + quote(dir.string())) == 0);
  REQUIRE(cli("ingest --input " + quote((dir / "trace.csv").string()) + " --out-dir " + quote(dir.string())) == 0);
  const auto report = pdm::io::parse(slurp(dir / "ingest_report.json"), "r");
  CHECK(report["n_rows"] == 8700);
  CHECK(report["rows_dropped_sentinel"] == 0);
  CHECK(report["rows_dropped_unparseable"] == 0);
  CHECK(report["schema_version"] == 1);
  fs::remove_all(dir);
}

TEST_CASE("evaluate reports every kind with five splits") {
  const auto dir = testproc::scratch("cli_eval");
  const std::string out = " --out-dir " + quote(dir.string());
  REQUIRE(cli("synth --seed 2 --config " + data("synth_table1.json") + out) == 0);
  testproc::spit(dir / "small.json", R"({"params":{"forest":{"n_trees":10},"boost":{"n_stages":20}}})");
  REQUIRE(cli("evaluate --seed 2 --format json,csv,table --input " + quote((dir / "trace.csv").string()) +
              " --config " + quote((dir / "small.json").string()) + out) == 0);
  const auto rep = pdm::io::parse(slurp(dir / "eval_report.json"), "e");
  REQUIRE(rep["reports"].size() == 3);
  for (const auto& r : rep["reports"]) CHECK(r["folds"].size() == 5);
  const auto table = slurp(dir / "eval_report.txt");
  CHECK(table.find("Average") != std::string::npos);
  CHECK(fs::exists(dir / "eval_report.csv"));
  fs::remove_all(dir);
}

TEST_CASE("train, detect and simulate") {
  const auto dir = testproc::scratch("cli_chain");
  const std::string out = " --out-dir " + quote(dir.string());
  testproc::spit(dir / "plan.json",
                 R"({"trace":{"noise_sigma_kpa":0.2},"injections":[{"type":"stuck_at","at_s":5000,"duration_s":300}]})");
  REQUIRE(cli("synth --seed 3 --config " + quote((dir / "plan.json").string()) + out) == 0);
  const std::string csv = quote((dir / "trace.csv").string());
  REQUIRE(cli("train --seed 3 --model boost --input " + csv + out) == 0);
  const auto model = pdm::io::trained_model_from_json(pdm::io::parse(slurp(dir / "model.json"), "m"), "m");
  CHECK(model.model.kind() == pdm::ModelKind::Boost);
  REQUIRE(cli("detect --input " + csv + " --config " + data("detector_config.json") + out) == 0);
  CHECK(slurp(dir / "events.jsonl").find("\"stuck_at\"") != std::string::npos);
  REQUIRE(cli("train --seed 3 --input " + csv + out) == 0);
  REQUIRE(cli("simulate --seed 3 --scenario " + data("scenario1.json") + " --model " + quote((dir / "model.json").string()) +
              out) == 0);
  CHECK(pdm::io::parse(slurp(dir / "comparison.json"), "c")["outcomes"].size() == 3);
  fs::remove_all(dir);
}

TEST_CASE("bundled ledger reproduces the four Monte Carlo rows") {
  const auto dir = testproc::scratch("cli_cba");
  REQUIRE(cli("cba --seed 1 --ledger " + data("paper_table3.json") + " --config " + data("mc_config.json") +
              " --out-dir " + quote(dir.string())) == 0);
  const auto j = pdm::io::parse(slurp(dir / "net_benefit.json"), "n");
  CHECK(j["trials"] == 10000);
  REQUIRE(j["items"].size() == 4);
  const double means[] = {725, 275, 750, 5.5};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(j["items"][i]["summary"]["mean"].get<double>() - means[i]) < 6.0);
  fs::remove_all(dir);
}

TEST_CASE("output directory from the environment") {
  const auto dir = testproc::scratch("cli_env");
  REQUIRE(run("PDM_OUT_DIR=" + quote(dir.string()) + " " + quote(kCli) + " cba --seed 1 --trials 50 --format json --ledger " +
              data("paper_table3.json") + " >/dev/null") == 0);
  CHECK(fs::exists(dir / "net_benefit.json"));
  CHECK_FALSE(fs::exists(dir / "net_benefit.txt"));
  fs::remove_all(dir);
}

TEST_CASE("exit codes") {
  const auto dir = testproc::scratch("cli_exit");
  const std::string out = " --out-dir " + quote(dir.string());
  CHECK(cli("--help") == 0);
  CHECK(cli("") == 1);
  CHECK(cli("cba --seed 1 --ledger " + data("paper_table3.json") + " --bogus" + out) == 1);
  CHECK(cli("cba --ledger " + data("paper_table3.json") + out) == 1);
  CHECK(cli("cba --seed 1 --ledger /does/not/exist.json" + out) == 1);
  testproc::spit(dir / "bad_ledger.json", R"({"items":[{"name":"x","ledger":"nowhere"}]})");
  CHECK(cli("cba --seed 1 --ledger " + quote((dir / "bad_ledger.json").string()) + out) == 1);
  testproc::spit(dir / "bad_plan.json", R"({"trace":{"duration_secs":10}})");
  CHECK(cli("synth --seed 1 --config " + quote((dir / "bad_plan.json").string()) + out) == 1);
  testproc::spit(dir / "tiny.csv", "Timestamp,DPIT301\n2020-01-01T00:00:00,1\n2020-01-01T00:00:01,2\n");
  CHECK(cli("evaluate --seed 1 --input " + quote((dir / "tiny.csv").string()) + out) == 1);
  CHECK(cli("train --seed 1 --channel NOPE --input " + quote((dir / "tiny.csv").string()) + out) == 1);
  // An unwritable output location is a runtime failure, not a validation error.
  testproc::spit(dir / "blocker", "x");
  CHECK(cli("cba --seed 1 --trials 10 --ledger " + data("paper_table3.json") + " --out-dir " +
            quote((dir / "blocker" / "sub").string())) == 2);
  fs::remove_all(dir);
}

TEST_CASE("reruns are byte-identical") {
  const auto a = testproc::scratch("cli_rerun_a");
  const auto b = testproc::scratch("cli_rerun_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(cli("simulate --seed 9 --scenario " + data("scenario2.json") + " --out-dir " + quote(dir.string())) == 0);
    REQUIRE(cli("cba --seed 9 --trials 500 --ledger " + data("paper_table3.json") + " --comparison " +
                quote((dir / "comparison.json").string()) + " --out-dir " + quote(dir.string())) == 0);
  }
  CHECK(slurp(a / "comparison.json") == slurp(b / "comparison.json"));
  CHECK(slurp(a / "net_benefit.json") == slurp(b / "net_benefit.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}
