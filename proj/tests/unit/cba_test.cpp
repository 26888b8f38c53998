#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pdm/cba.hpp"
#include "pdm/error.hpp"

using namespace pdm;
using namespace pdm::cba;

namespace {

LineItem item(std::string name, Ledger ledger, std::string category, AmountSpec amount,
              ItemKind kind = ItemKind::Variable) {
  return {std::move(name), ledger, std::move(category), kind, amount, ""};
}

}  // namespace

TEST_SUITE("cba") {
  TEST_CASE("degenerate distributions") {
    rng::Stream s(1);
    for (int i = 0; i < 100; ++i) {
      CHECK(sample_amount(Point{5.0}, s) == 5.0);
      CHECK(sample_amount(Uniform{3.0, 3.0}, s) == 3.0);
      CHECK(sample_amount(Triangular{2.0, 2.0, 2.0}, s) == 2.0);
      CHECK(sample_amount(Normal{4.0, 0.0}, s) == 4.0);
    }
  }

  TEST_CASE("supports and moments") {
    rng::Stream s(2);
    std::vector<double> u, t, n;
    for (int i = 0; i < 20000; ++i) {
      u.push_back(sample_amount(Uniform{500, 1000}, s));
      t.push_back(sample_amount(Triangular{0, 3, 6}, s));
      n.push_back(sample_amount(Normal{1.0, 1.0}, s));
    }
    for (double v : u) REQUIRE((v >= 500 && v <= 1000));
    for (double v : t) REQUIRE((v >= 0 && v <= 6));
    for (double v : n) REQUIRE(v >= 0.0);
    CHECK(std::fabs(oracle::mean(u) - 750) < 4 * 500 / std::sqrt(12.0 * 20000));
    CHECK(std::fabs(oracle::mean(t) - 3.0) < 0.05);
    CHECK(std::fabs(oracle::sample_sd(t) - std::sqrt(1.5)) < 0.05);
    // Normal(1, 1) truncated at 0: mean = 1 + phi(1)/Phi(1).
    CHECK(std::fabs(oracle::mean(n) - (1.0 + 0.24197072451914337 / 0.8413447460685429)) < 0.03);
  }

  TEST_CASE("invalid specs") {
    CHECK_THROWS_AS(validate_amount(Uniform{2, 1}), ValidationError);
    CHECK_THROWS_AS(validate_amount(Triangular{0, 5, 4}), ValidationError);
    CHECK_THROWS_AS(validate_amount(Normal{0, -1}), ValidationError);
    CHECK_THROWS_AS(validate_amount(Normal{-10, 1}), ValidationError);
    CHECK_THROWS_AS(validate_amount(Point{std::nan("")}), ValidationError);
  }

  TEST_CASE("summaries against direct computation") {
    CHECK_THROWS_AS(summarize({}), ValidationError);
    const auto one = summarize({4.0});
    CHECK(one.sd == 0.0);
    CHECK(one.p5 == 4.0);
    std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    const auto s = summarize(v);
    CHECK(s.mean == 6.0);
    CHECK(s.sd == doctest::Approx(oracle::sample_sd(v)));
    CHECK(s.min == 1.0);
    CHECK(s.max == 11.0);
    CHECK(s.p50 == 6.0);
    CHECK(s.p5 == doctest::Approx(1.5));
    CHECK(s.p95 == doctest::Approx(10.5));
  }

  TEST_CASE("point items simulate to points") {
    const auto it = item("x", Ledger::DirectSaving, "operating", Point{5.0});
    const auto s = simulate_item(it, McConfig{100, 1, 0});
    CHECK(s.mean == 5.0);
    CHECK(s.sd == 0.0);
    CHECK(s.max == 5.0);
    CHECK(s.min == 5.0);
  }

  TEST_CASE("uniform item moments") {
    const auto it = item("Avoidance of lost revenue", Ledger::IndirectSaving, "lost_productivity_avoidance",
                         Uniform{500, 1000});
    const auto s = simulate_item(it, McConfig{10000, 1, 0});
    CHECK(std::fabs(s.mean - 750.0) < 5.0);
    CHECK(std::fabs(s.sd - 500.0 / std::sqrt(12.0)) < 5.0);
    const auto m = simulate_item(item("m", Ledger::DirectSaving, "operating", Uniform{1, 10}), McConfig{10000, 1, 0});
    CHECK(std::fabs(m.mean - 5.5) < 0.1);
    CHECK(std::fabs(m.sd - 9.0 / std::sqrt(12.0)) < 0.1);
    CHECK(m.min <= m.p5);
    CHECK(m.p5 <= m.p50);
    CHECK(m.p50 <= m.p95);
    CHECK(m.p95 <= m.max);
  }

  TEST_CASE("point ledger arithmetic") {
    const std::vector<LineItem> ledger{item("d", Ledger::DirectSaving, "operating", Point{10}),
                                       item("i", Ledger::IndirectSaving, "maintenance_cycle_delay", Point{5}),
                                       item("c", Ledger::ImplementationCost, "equipment", Point{12}, ItemKind::Fixed)};
    const auto r = net_benefit(ledger, McConfig{50, 3, 0});
    for (double v : r.net_samples) CHECK(v == 3.0);
    CHECK(r.net.mean == 3.0);
    const std::vector<LineItem> zeros{item("z", Ledger::DirectSaving, "operating", Point{0})};
    for (double v : net_benefit(zeros, McConfig{10, 3, 0}).net_samples) CHECK(v == 0.0);
  }

  TEST_CASE("net equals direct plus indirect minus implementation on every trial") {
    const std::vector<LineItem> ledger{
        item("a", Ledger::DirectSaving, "operating", Uniform{500, 950}),
        item("b", Ledger::DirectSaving, "financing", Triangular{0, 10, 40}),
        item("c", Ledger::IndirectSaving, "lost_productivity_avoidance", Normal{100, 30}),
        item("d", Ledger::ImplementationCost, "labor", Uniform{50, 300}),
        item("e", Ledger::ImplementationCost, "supplies_inventories", Point{25}, ItemKind::Fixed),
        item("f", Ledger::DirectSaving, "disposal_gain", Point{60}, ItemKind::OneOff)};
    const auto r = net_benefit(ledger, McConfig{5000, 11, 0});
    REQUIRE(r.net_samples.size() == 5000);
    for (std::size_t j = 0; j < 5000; ++j) {
      CHECK(r.net_samples[j] == (r.direct_samples[j] + r.indirect_samples[j]) - r.implementation_samples[j]);
    }
    double expected = 0.0, var = 0.0;
    for (const auto& is : r.items) {
      expected += (is.ledger == Ledger::ImplementationCost ? -1.0 : 1.0) * is.summary.mean;
      var += is.summary.sd * is.summary.sd;
    }
    CHECK(std::fabs(r.net.mean - expected) < 3.0 * std::sqrt(var / 5000.0) + 1e-9);
    CHECK(r == net_benefit(ledger, McConfig{5000, 11, 4}));
    CHECK_FALSE(r == net_benefit(ledger, McConfig{5000, 12, 0}));
  }

  TEST_CASE("per-item samples are independent of ledger composition") {
    const auto a = item("a", Ledger::DirectSaving, "operating", Uniform{0, 1});
    const auto b = item("b", Ledger::DirectSaving, "operating", Uniform{0, 1});
    const McConfig cfg{200, 5, 0};
    const auto alone = net_benefit({a}, cfg);
    const auto both = net_benefit({b, a}, cfg);
    CHECK(alone.items[0].summary == both.items[1].summary);
    CHECK(simulate_item(a, cfg) == alone.items[0].summary);
  }

  TEST_CASE("taxonomy") {
    CHECK_THROWS_AS(item("x", Ledger::DirectSaving, "equipment", Point{1}).validate(), ValidationError);
    CHECK_THROWS_AS(item("x", Ledger::DirectSaving, "disposal_gain", Point{1}).validate(), ValidationError);
    CHECK_THROWS_AS(item("x", Ledger::ImplementationCost, "labor", Point{1}, ItemKind::OneOff).validate(),
                    ValidationError);
    CHECK_NOTHROW(item("x", Ledger::IndirectSaving, "maintenance_cycle_delay", Point{1}).validate());
    CHECK_THROWS_AS(net_benefit({}, McConfig{}), ValidationError);
    CHECK_THROWS_AS(net_benefit({item("x", Ledger::DirectSaving, "operating", Point{1})}, McConfig{0, 1, 0}),
                    ValidationError);
    const auto dup = item("x", Ledger::DirectSaving, "operating", Point{1});
    CHECK_THROWS_AS(validate_ledger({dup, dup}), ValidationError);
  }

  TEST_CASE("ledger JSON") {
    const auto items = parse_ledger_json(R"({"schema_version":1,"items":[
      {"name":"Inspection cost savings","ledger":"direct_saving","category":"operating","kind":"variable",
       "amount":{"dist":"uniform","min":500,"max":950},"assumptions":"uniform"},
      {"name":"Kit","ledger":"implementation_cost","category":"equipment","kind":"fixed",
       "amount":{"dist":"triangular","min":1,"mode":2,"max":3}}]})");
    REQUIRE(items.size() == 2);
    CHECK(items[0].amount == AmountSpec{Uniform{500, 950}});
    CHECK(items[1].ledger == Ledger::ImplementationCost);
    CHECK_THROWS_AS(parse_ledger_json(R"({"items":[]})"), ValidationError);
    CHECK_THROWS_WITH(parse_ledger_json(R"({"items":[{"name":"Bad tri","ledger":"direct_saving","category":"operating",
      "kind":"variable","amount":{"dist":"triangular","min":5,"mode":4,"max":3}}]})"),
                      doctest::Contains("Bad tri"));
    CHECK_THROWS_AS(parse_ledger_json("{"), ValidationError);
    CHECK_THROWS_AS(parse_ledger_json(R"({"items":[{"name":"x","ledger":"direct_saving","category":"operating",
      "kind":"variable","amount":{"dist":"lognormal"}}]})"),
                    ValidationError);
  }

  TEST_CASE("bridge from simulation") {
    ComparisonReport rep;
    SimOutcome prev, pred;
    prev.kind = PolicyKind::Preventive;
    prev.uptime_s = 4500;
    prev.maintenance_count = 4;
    pred.kind = PolicyKind::Predictive;
    pred.uptime_s = 8100;
    pred.maintenance_count = 1;
    rep.outcomes = {prev, pred};
    const std::vector<LineItem> base{item("Avoidance of lost revenue", Ledger::IndirectSaving,
                                          "lost_productivity_avoidance", Uniform{500, 1000}),
                                     item("Other", Ledger::DirectSaving, "operating", Point{1})};
    const auto out = bridge_from_simulation(rep, 2.0, 50.0, base);
    REQUIRE(out.size() == 3);
    CHECK(out[0].amount == AmountSpec{Point{7200.0}});
    CHECK(out[2].name == "Maintenance cost savings");
    CHECK(out[2].amount == AmountSpec{Point{150.0}});
    CHECK(bridge_from_simulation(rep, 2.0, 0.0, base)[2].amount == AmountSpec{Point{0.0}});
    pred.uptime_s = prev.uptime_s;
    pred.maintenance_count = prev.maintenance_count;
    rep.outcomes[1] = pred;
    const auto zero = bridge_from_simulation(rep, 2.0, 50.0, {});
    CHECK(zero[0].amount == AmountSpec{Point{0.0}});
    CHECK(zero[1].amount == AmountSpec{Point{0.0}});
    rep.outcomes = {prev};
    CHECK_THROWS_AS(bridge_from_simulation(rep, 1.0, 1.0, base), ValidationError);
  }
}
