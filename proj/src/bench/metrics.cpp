// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <string>

#include "ivoro/bench.hpp"
#include "ivoro/error.hpp"

namespace ivoro {

double avg_forgetting(std::span<const std::vector<double>> accuracy, std::size_t t) {
  if (t >= accuracy.size()) {
    throw DataError("avg_forgetting: phase " + std::to_string(t) + " beyond history of " +
                    std::to_string(accuracy.size()) + " phases");
  }
  if (t == 0) return 0.0;
  const std::size_t tasks = std::min(t, accuracy[t].size());
  if (tasks == 0) return 0.0;
  double total = 0.0;
  for (std::size_t tau = 0; tau < tasks; ++tau) {
    double best = accuracy[t][tau];
    for (std::size_t s = tau; s < t; ++s) {
      if (tau >= accuracy[s].size()) {
        throw DataError("avg_forgetting: task " + std::to_string(tau) + " missing at phase " + std::to_string(s));
      }
      best = std::max(best, accuracy[s][tau]);
    }
    total += best - accuracy[t][tau];
  }
  return total / static_cast<double>(tasks);
}

double accuracy_percent(std::span<const LabeledPrediction> predictions) {
  if (predictions.empty()) return 0.0;
  const auto hits = std::count_if(predictions.begin(), predictions.end(),
                                  [](const LabeledPrediction& p) { return p.label == p.predicted; });
  return 100.0 * static_cast<double>(hits) / static_cast<double>(predictions.size());
}

}  // namespace ivoro
