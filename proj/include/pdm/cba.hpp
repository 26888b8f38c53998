#pragma once

// Three-ledger cost-benefit model with Monte Carlo sampling of uncertain
// line items.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pdm/plantsim.hpp"
#include "pdm/rng.hpp"

namespace pdm::cba {

struct Point {
  double value = 0.0;
  bool operator==(const Point&) const = default;
};
struct Uniform {
  double min = 0.0;
  double max = 0.0;
  bool operator==(const Uniform&) const = default;
};
struct Triangular {
  double min = 0.0;
  double mode = 0.0;
  double max = 0.0;
  bool operator==(const Triangular&) const = default;
};
// Truncated at zero by rejection.
struct Normal {
  double mu = 0.0;
  double sigma = 0.0;
  bool operator==(const Normal&) const = default;
};

using AmountSpec = std::variant<Point, Uniform, Triangular, Normal>;

std::string_view dist_name(const AmountSpec& spec);
void validate_amount(const AmountSpec& spec);
double sample_amount(const AmountSpec& spec, rng::Stream& stream);

enum class Ledger { ImplementationCost, DirectSaving, IndirectSaving };
enum class ItemKind { Fixed, Variable, OneOff };

std::string_view ledger_name(Ledger ledger);
Ledger parse_ledger(std::string_view text);
std::string_view item_kind_name(ItemKind kind);
ItemKind parse_item_kind(std::string_view text);

// Allowed categories per ledger.
std::vector<std::string_view> categories_for(Ledger ledger);

struct LineItem {
  std::string name;
  Ledger ledger = Ledger::DirectSaving;
  std::string category;
  ItemKind kind = ItemKind::Variable;
  AmountSpec amount = Point{};
  std::string assumptions;

  void validate() const;
  bool operator==(const LineItem&) const = default;
};

struct McConfig {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::size_t n_threads = 0;  // 0 = hardware concurrency; results do not depend on it

  void validate() const;
};

struct McSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample, n-1 divisor; 0 for a single trial
  double max = 0.0;
  double min = 0.0;
  double p5 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;

  bool operator==(const McSummary&) const = default;
};

McSummary summarize(std::vector<double> samples);

// Samples for one item: trial j uses the stream derived from
// (seed, hash_name(item.name), j).
std::vector<double> sample_item(const LineItem& item, const McConfig& config);
McSummary simulate_item(const LineItem& item, const McConfig& config);

struct ItemSummary {
  std::string name;
  Ledger ledger = Ledger::DirectSaving;
  McSummary summary;

  bool operator==(const ItemSummary&) const = default;
};

struct NetBenefitResult {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<ItemSummary> items;
  McSummary implementation;
  McSummary direct;
  McSummary indirect;
  McSummary net;
  std::vector<double> implementation_samples;
  std::vector<double> direct_samples;
  std::vector<double> indirect_samples;
  std::vector<double> net_samples;  // direct + indirect - implementation, per trial

  bool operator==(const NetBenefitResult&) const = default;
};

NetBenefitResult net_benefit(const std::vector<LineItem>& ledger, const McConfig& config);

// Throws on an empty list, duplicate names or any invalid item.
void validate_ledger(const std::vector<LineItem>& ledger);
std::vector<LineItem> parse_ledger_json(std::string_view text, const std::string& source = "<ledger>");
std::vector<LineItem> load_ledger(const std::filesystem::path& path);

inline constexpr std::string_view kLostRevenueItem = "Avoidance of lost revenue";
inline constexpr std::string_view kMaintenanceSavingsItem = "Maintenance cost savings";

// Upserts the two simulation-derived indirect savings: lost revenue avoided
// (predictive minus preventive uptime times revenue_rate) and maintenance
// events avoided times unit_maintenance_cost.
std::vector<LineItem> bridge_from_simulation(const ComparisonReport& comparison, double revenue_rate,
                                             double unit_maintenance_cost, std::vector<LineItem> ledger);

// Average, SD, Max, Min per item then ledger totals and net.
std::string format_net_benefit_table(const NetBenefitResult& result);

}  // namespace pdm::cba
