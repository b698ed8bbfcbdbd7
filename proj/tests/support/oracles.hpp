#pragma once

// Independent reference implementations used to cross-check the library.
// Deliberately written against std::set representations with plain loops,
// sharing no code with the implementation under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include "vaxkit/classifier.hpp"
#include "vaxkit/labels.hpp"
#include "vaxkit/metrics.hpp"

namespace vaxkit::oracle {

inline std::set<int> as_index_set(LabelSet set) {
  std::set<int> out;
  for (int i = 0; i < 12; ++i) {
    if (set.contains(static_cast<Label>(i))) out.insert(i);
  }
  return out;
}

struct Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

inline std::array<Counts, 12> confusion(const std::vector<PredictionPair>& pairs) {
  std::array<Counts, 12> out{};
  for (int label = 0; label < 12; ++label) {
    for (const auto& pair : pairs) {
      const auto pred = as_index_set(pair.predicted);
      const auto gold = as_index_set(pair.gold);
      const bool p = pred.count(label) > 0;
      const bool g = gold.count(label) > 0;
      if (p && g) out[label].tp += 1;
      if (p && !g) out[label].fp += 1;
      if (!p && g) out[label].fn += 1;
    }
  }
  return out;
}

inline double macro_f1(const std::vector<PredictionPair>& pairs, bool skip_absent = false) {
  const auto counts = confusion(pairs);
  double total = 0.0;
  int used = 0;
  for (int label = 0; label < 12; ++label) {
    const long tp = counts[label].tp, fp = counts[label].fp, fn = counts[label].fn;
    if (skip_absent && tp + fp + fn == 0) continue;
    double f1 = 0.0;
    if (2 * tp + fp + fn > 0) {
      f1 = (2.0 * tp) / (2.0 * tp + fp + fn);
    }
    total += f1;
    used += 1;
  }
  return used == 0 ? 0.0 : total / used;
}

inline double sample_jaccard(const std::vector<PredictionPair>& pairs) {
  double total = 0.0;
  for (const auto& pair : pairs) {
    const auto pred = as_index_set(pair.predicted);
    const auto gold = as_index_set(pair.gold);
    std::set<int> inter;
    std::set_intersection(pred.begin(), pred.end(), gold.begin(), gold.end(),
                          std::inserter(inter, inter.begin()));
    std::set<int> uni;
    std::set_union(pred.begin(), pred.end(), gold.begin(), gold.end(),
                   std::inserter(uni, uni.begin()));
    total += static_cast<double>(inter.size()) / static_cast<double>(uni.size());
  }
  return total / static_cast<double>(pairs.size());
}

inline double label_jaccard(const std::vector<PredictionPair>& pairs) {
  const auto counts = confusion(pairs);
  double total = 0.0;
  for (int label = 0; label < 12; ++label) {
    const long denom = counts[label].tp + counts[label].fp + counts[label].fn;
    if (denom > 0) total += static_cast<double>(counts[label].tp) / static_cast<double>(denom);
  }
  return total / 12.0;
}

/// Central finite difference of a scalar function of one parameter.
inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Numeric gradient of the BCE loss with respect to every head parameter.
/// Returns (weight gradients, bias gradients), matching DenseHead layout.
inline std::pair<std::vector<double>, std::array<double, 12>> numeric_bce_gradients(
    DenseHead head, const std::vector<double>& embedding, const std::array<int, 12>& target,
    double h) {
  const std::size_t dim = head.embedding_dim();
  std::vector<double> grad_w(12 * dim, 0.0);
  std::array<double, 12> grad_b{};
  auto loss_at = [&]() { return bce_loss(head.logits(embedding), target); };
  for (std::size_t j = 0; j < 12; ++j) {
    for (std::size_t k = 0; k < dim; ++k) {
      double& w = head.weight_at(j, k);
      const double saved = w;
      w = saved + h;
      const double up = loss_at();
      w = saved - h;
      const double down = loss_at();
      w = saved;
      grad_w[j * dim + k] = (up - down) / (2.0 * h);
    }
    double& b = head.bias()[j];
    const double saved = b;
    b = saved + h;
    const double up = loss_at();
    b = saved - h;
    const double down = loss_at();
    b = saved;
    grad_b[j] = (up - down) / (2.0 * h);
  }
  return {grad_w, grad_b};
}

}  // namespace vaxkit::oracle
