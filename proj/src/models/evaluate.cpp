#include "pdm/models/evaluate.hpp"

#include <algorithm>
#include <sstream>

#include "pdm/error.hpp"
#include "pdm/rng.hpp"
#include "pdm/util.hpp"

namespace pdm {

EvalReport evaluate_cv(const SupervisedSet& set, const SplitPlan& plan, ModelKind kind, const ModelParams& params,
                       std::uint64_t seed) {
  EvalReport report;
  report.kind = kind;
  report.lags = set.lags;
  report.folds = plan.folds;
  for (std::size_t i = 0; i < plan.folds.size(); ++i) {
    const Fold& fold = plan.folds[i];
    if (fold.test.end > set.rows()) throw ValidationError("evaluate_cv: split plan exceeds the supervised set");
    const Matrix train_X = set.X.row_range(fold.train.begin, fold.train.end);
    const std::span<const double> train_y(set.y.data() + fold.train.begin, fold.train.size());
    const ForecastModel model = fit_model(kind, train_X, train_y, params, rng::derive_seed(seed, i));

    const Matrix test_X = set.X.row_range(fold.test.begin, fold.test.end);
    const std::span<const double> test_y(set.y.data() + fold.test.begin, fold.test.size());
    report.per_split_rmse.push_back(rmse(test_y, predict(model, test_X)));
  }
  double total = 0.0;
  for (double v : report.per_split_rmse) total += v;
  report.average_rmse = total / static_cast<double>(report.per_split_rmse.size());
  return report;
}

EvalReport evaluate_cv(std::span<const double> series, const LagSpec& lags, std::size_t k, ModelKind kind,
                       const ModelParams& params, std::uint64_t seed) {
  const SupervisedSet set = make_lag_matrix(series, lags);
  const SplitPlan plan = walk_forward_splits(set.rows(), k);
  return evaluate_cv(set, plan, kind, params, seed);
}

std::string format_eval_table(std::span<const EvalReport> reports) {
  std::vector<std::string> header{"Split Number"};
  for (const auto& r : reports) header.push_back(std::string(model_kind_label(r.kind)) + " RMSE (kPa)");

  std::size_t splits = 0;
  for (const auto& r : reports) splits = std::max(splits, r.per_split_rmse.size());

  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < splits; ++i) {
    std::vector<std::string> row{std::to_string(i + 1)};
    for (const auto& r : reports) row.push_back(i < r.per_split_rmse.size() ? format_fixed(r.per_split_rmse[i], 2) : "-");
    rows.push_back(std::move(row));
  }
  std::vector<std::string> avg{"Average"};
  for (const auto& r : reports) avg.push_back(format_fixed(r.average_rmse, 2));
  rows.push_back(std::move(avg));

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << "  ";
      const std::size_t pad = width[c] - cells[c].size();
      if (c == 0) {
        out << cells[c] << std::string(pad, ' ');
      } else {
        out << std::string(pad, ' ') << cells[c];
      }
    }
    out << '\n';
  };
  emit(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& row : rows) emit(row);
  return out.str();
}

}  // namespace pdm
