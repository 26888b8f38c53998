#include "pdm/cba.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pdm/error.hpp"
#include "pdm/util.hpp"

namespace pdm::cba {
namespace {

using nlohmann::json;

bool finite(double v) { return std::isfinite(v); }

double percentile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return s[lo] + (s[hi] - s[lo]) * frac;
}

double number_field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing field '" + key + "'");
  if (!it->is_number()) throw ValidationError(where + ": field '" + key + "' must be a number");
  return it->get<double>();
}

std::string string_field(const json& obj, const char* key, const std::string& where, bool required = true) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (required) throw ValidationError(where + ": missing field '" + key + "'");
    return {};
  }
  if (!it->is_string()) throw ValidationError(where + ": field '" + key + "' must be a string");
  return it->get<std::string>();
}

AmountSpec parse_amount(const json& a, const std::string& where) {
  if (!a.is_object()) throw ValidationError(where + ": 'amount' must be an object");
  const std::string dist = string_field(a, "dist", where + ".amount");
  const std::string w = where + ".amount";
  if (dist == "point") return Point{number_field(a, "value", w)};
  if (dist == "uniform") return Uniform{number_field(a, "min", w), number_field(a, "max", w)};
  if (dist == "triangular") {
    return Triangular{number_field(a, "min", w), number_field(a, "mode", w), number_field(a, "max", w)};
  }
  if (dist == "normal") return Normal{number_field(a, "mu", w), number_field(a, "sigma", w)};
  throw ValidationError(w + ": unknown dist '" + dist + "' (expected point, uniform, triangular or normal)");
}

}  // namespace

std::string_view dist_name(const AmountSpec& spec) {
  switch (spec.index()) {
    case 0: return "point";
    case 1: return "uniform";
    case 2: return "triangular";
    default: return "normal";
  }
}

void validate_amount(const AmountSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          if (!finite(s.value)) throw ValidationError("Point: value must be finite");
        } else if constexpr (std::is_same_v<T, Uniform>) {
          if (!finite(s.min) || !finite(s.max)) throw ValidationError("Uniform: bounds must be finite");
          if (s.min > s.max) throw ValidationError("Uniform: min exceeds max");
        } else if constexpr (std::is_same_v<T, Triangular>) {
          if (!finite(s.min) || !finite(s.mode) || !finite(s.max)) {
            throw ValidationError("Triangular: parameters must be finite");
          }
          if (!(s.min <= s.mode && s.mode <= s.max)) throw ValidationError("Triangular: requires min <= mode <= max");
        } else {
          if (!finite(s.mu) || !finite(s.sigma)) throw ValidationError("Normal: parameters must be finite");
          if (s.sigma < 0.0) throw ValidationError("Normal: sigma must be non-negative");
          if (s.sigma == 0.0 ? s.mu < 0.0 : s.mu < -5.0 * s.sigma) {
            throw ValidationError("Normal: almost no mass above zero (mu < -5 sigma)");
          }
        }
      },
      spec);
}

double sample_amount(const AmountSpec& spec, rng::Stream& stream) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return s.value;
        } else if constexpr (std::is_same_v<T, Uniform>) {
          return s.min == s.max ? s.min : stream.uniform(s.min, s.max);
        } else if constexpr (std::is_same_v<T, Triangular>) {
          const double width = s.max - s.min;
          if (width == 0.0) return s.min;
          const double u = stream.uniform01();
          const double fc = (s.mode - s.min) / width;
          if (u < fc) return s.min + std::sqrt(u * width * (s.mode - s.min));
          return s.max - std::sqrt((1.0 - u) * width * (s.max - s.mode));
        } else {
          if (s.sigma == 0.0) return s.mu;
          for (;;) {
            const double v = stream.normal(s.mu, s.sigma);
            if (v >= 0.0) return v;
          }
        }
      },
      spec);
}

std::string_view ledger_name(Ledger ledger) {
  switch (ledger) {
    case Ledger::ImplementationCost: return "implementation_cost";
    case Ledger::DirectSaving: return "direct_saving";
    case Ledger::IndirectSaving: return "indirect_saving";
  }
  return "unknown";
}

Ledger parse_ledger(std::string_view text) {
  if (text == "implementation_cost") return Ledger::ImplementationCost;
  if (text == "direct_saving") return Ledger::DirectSaving;
  if (text == "indirect_saving") return Ledger::IndirectSaving;
  throw ValidationError("unknown ledger '" + std::string(text) +
                        "' (expected implementation_cost, direct_saving or indirect_saving)");
}

std::string_view item_kind_name(ItemKind kind) {
  switch (kind) {
    case ItemKind::Fixed: return "fixed";
    case ItemKind::Variable: return "variable";
    case ItemKind::OneOff: return "one_off";
  }
  return "unknown";
}

ItemKind parse_item_kind(std::string_view text) {
  if (text == "fixed") return ItemKind::Fixed;
  if (text == "variable") return ItemKind::Variable;
  if (text == "one_off") return ItemKind::OneOff;
  throw ValidationError("unknown kind '" + std::string(text) + "' (expected fixed, variable or one_off)");
}

std::vector<std::string_view> categories_for(Ledger ledger) {
  switch (ledger) {
    case Ledger::ImplementationCost: return {"equipment", "supplies_inventories", "labor"};
    case Ledger::DirectSaving: return {"operating", "financing", "disposal_gain"};
    case Ledger::IndirectSaving: return {"lost_productivity_avoidance", "maintenance_cycle_delay"};
  }
  return {};
}

void LineItem::validate() const {
  const std::string where = "item '" + name + "'";
  if (name.empty()) throw ValidationError("line item with empty name");
  const auto cats = categories_for(ledger);
  if (std::find(cats.begin(), cats.end(), category) == cats.end()) {
    std::string allowed;
    for (auto c : cats) allowed += (allowed.empty() ? "" : ", ") + std::string(c);
    throw ValidationError(where + ": category '" + category + "' is not allowed in ledger " +
                          std::string(ledger_name(ledger)) + " (allowed: " + allowed + ")");
  }
  if (ledger == Ledger::ImplementationCost && kind == ItemKind::OneOff) {
    throw ValidationError(where + ": implementation costs must be fixed or variable");
  }
  if (category == "disposal_gain" && kind != ItemKind::OneOff) {
    throw ValidationError(where + ": disposal_gain items must be one_off");
  }
  try {
    validate_amount(amount);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

void McConfig::validate() const {
  if (trials < 1) throw ValidationError("McConfig: trials must be at least 1");
}

McSummary summarize(std::vector<double> samples) {
  if (samples.empty()) throw ValidationError("summarize: no samples");
  const std::size_t n = samples.size();
  McSummary s;
  long double acc = 0.0L;
  for (double v : samples) acc += v;
  s.mean = static_cast<double>(acc / static_cast<long double>(n));
  if (n > 1) {
    long double ss = 0.0L;
    for (double v : samples) {
      const long double d = static_cast<long double>(v) - s.mean;
      ss += d * d;
    }
    s.sd = static_cast<double>(std::sqrt(ss / static_cast<long double>(n - 1)));
  }
  std::sort(samples.begin(), samples.end());
  s.min = samples.front();
  s.max = samples.back();
  s.p5 = percentile_sorted(samples, 0.05);
  s.p50 = percentile_sorted(samples, 0.50);
  s.p95 = percentile_sorted(samples, 0.95);
  return s;
}

std::vector<double> sample_item(const LineItem& item, const McConfig& config) {
  item.validate();
  config.validate();
  std::vector<double> out(config.trials);
  const std::uint64_t key = rng::hash_name(item.name);
  parallel_for(config.trials, config.n_threads, [&](std::size_t j) {
    rng::Stream stream(rng::derive_seed(config.seed, key, j));
    out[j] = sample_amount(item.amount, stream);
  });
  return out;
}

McSummary simulate_item(const LineItem& item, const McConfig& config) { return summarize(sample_item(item, config)); }

void validate_ledger(const std::vector<LineItem>& ledger) {
  if (ledger.empty()) throw ValidationError("ledger has no items");
  std::set<std::string> seen;
  for (const auto& item : ledger) {
    item.validate();
    if (!seen.insert(item.name).second) throw ValidationError("duplicate item name '" + item.name + "'");
  }
}

NetBenefitResult net_benefit(const std::vector<LineItem>& ledger, const McConfig& config) {
  validate_ledger(ledger);
  config.validate();
  NetBenefitResult r;
  r.trials = config.trials;
  r.seed = config.seed;
  r.implementation_samples.assign(config.trials, 0.0);
  r.direct_samples.assign(config.trials, 0.0);
  r.indirect_samples.assign(config.trials, 0.0);
  for (const auto& item : ledger) {
    auto samples = sample_item(item, config);
    auto& total = item.ledger == Ledger::ImplementationCost ? r.implementation_samples
                  : item.ledger == Ledger::DirectSaving     ? r.direct_samples
                                                            : r.indirect_samples;
    for (std::size_t j = 0; j < samples.size(); ++j) total[j] += samples[j];
    r.items.push_back({item.name, item.ledger, summarize(std::move(samples))});
  }
  r.net_samples.resize(config.trials);
  for (std::size_t j = 0; j < config.trials; ++j) {
    r.net_samples[j] = (r.direct_samples[j] + r.indirect_samples[j]) - r.implementation_samples[j];
  }
  r.implementation = summarize(r.implementation_samples);
  r.direct = summarize(r.direct_samples);
  r.indirect = summarize(r.indirect_samples);
  r.net = summarize(r.net_samples);
  return r;
}

std::vector<LineItem> parse_ledger_json(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ValidationError(source + ": top level must be an object");
  if (auto v = doc.find("schema_version"); v != doc.end() && (!v->is_number_integer() || v->get<int>() != 1)) {
    throw ValidationError(source + ": unsupported schema_version (expected 1)");
  }
  auto items = doc.find("items");
  if (items == doc.end() || !items->is_array()) throw ValidationError(source + ": 'items' must be an array");
  std::vector<LineItem> out;
  for (std::size_t i = 0; i < items->size(); ++i) {
    const json& it = (*items)[i];
    std::string where = source + ": items[" + std::to_string(i) + "]";
    if (!it.is_object()) throw ValidationError(where + " must be an object");
    LineItem item;
    item.name = string_field(it, "name", where);
    where += " ('" + item.name + "')";
    try {
      item.ledger = parse_ledger(string_field(it, "ledger", where));
      item.category = string_field(it, "category", where);
      item.kind = parse_item_kind(string_field(it, "kind", where));
      if (!it.contains("amount")) throw ValidationError(where + ": missing field 'amount'");
      item.amount = parse_amount(it["amount"], where);
      item.assumptions = string_field(it, "assumptions", where, false);
      item.validate();
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      throw ValidationError(msg.rfind(source, 0) == 0 ? msg : where + ": " + msg);
    }
    out.push_back(std::move(item));
  }
  try {
    validate_ledger(out);
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return out;
}

std::vector<LineItem> load_ledger(const std::filesystem::path& path) {
  return parse_ledger_json(read_file(path), path.string());
}

std::vector<LineItem> bridge_from_simulation(const ComparisonReport& comparison, double revenue_rate,
                                             double unit_maintenance_cost, std::vector<LineItem> ledger) {
  const SimOutcome* prev = comparison.find(PolicyKind::Preventive);
  const SimOutcome* pred = comparison.find(PolicyKind::Predictive);
  if (!prev || !pred) throw ValidationError("bridge_from_simulation: comparison lacks a preventive or predictive outcome");
  if (!finite(revenue_rate) || !finite(unit_maintenance_cost)) {
    throw ValidationError("bridge_from_simulation: rates must be finite");
  }
  const double revenue_delta =
      (static_cast<double>(pred->uptime_s) - static_cast<double>(prev->uptime_s)) * revenue_rate;
  const double maint_delta =
      (static_cast<double>(prev->maintenance_count) - static_cast<double>(pred->maintenance_count)) *
      unit_maintenance_cost;

  auto upsert = [&](std::string_view name, std::string_view category, double value, std::string assumptions) {
    LineItem item{std::string(name), Ledger::IndirectSaving, std::string(category), ItemKind::Variable,
                  Point{value}, std::move(assumptions)};
    auto it = std::find_if(ledger.begin(), ledger.end(), [&](const LineItem& l) { return l.name == name; });
    if (it == ledger.end()) {
      ledger.push_back(std::move(item));
    } else {
      *it = std::move(item);
    }
  };
  upsert(kLostRevenueItem, "lost_productivity_avoidance", revenue_delta,
         "from simulation: (predictive uptime - preventive uptime) x revenue rate " + format_double(revenue_rate));
  upsert(kMaintenanceSavingsItem, "maintenance_cycle_delay", maint_delta,
         "from simulation: (preventive - predictive maintenance count) x unit cost " +
             format_double(unit_maintenance_cost));
  return ledger;
}

std::string format_net_benefit_table(const NetBenefitResult& result) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-34s %12s %12s %12s %12s\n", "Item", "Average", "SD", "Max", "Min");
  out << line << std::string(86, '-') << '\n';
  auto row = [&](const std::string& name, const McSummary& s) {
    std::snprintf(line, sizeof line, "%-34s %12.2f %12.2f %12.2f %12.2f\n", name.c_str(), s.mean, s.sd, s.max, s.min);
    out << line;
  };
  for (const auto& item : result.items) row(item.name, item.summary);
  out << std::string(86, '-') << '\n';
  row("Total cost of implementation", result.implementation);
  row("Total direct cost savings", result.direct);
  row("Total indirect cost savings", result.indirect);
  row("Net benefit (cost)", result.net);
  out << "\n" << result.trials << " trials, seed " << result.seed << '\n';
  return out.str();
}

}  // namespace pdm::cba
