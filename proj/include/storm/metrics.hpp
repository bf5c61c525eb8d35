#pragma once

#include <string>
#include <vector>

#include "storm/common.hpp"

namespace storm::harness {

struct MetricsReport {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
    std::string scenario;
    std::string method;
    double epsilon = 0.0;
};

// Confusion counts plus the derived metrics; degenerate denominators give 0.
template <class L>
MetricsReport compute_metrics(const std::vector<L>& predictions, const std::vector<L>& truth,
                              L positive_class) {
    if (predictions.size() != truth.size() || predictions.empty())
        throw RejectedInput("predictions and truth must be equal-length and non-empty");
    MetricsReport r;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool pred_pos = predictions[i] == positive_class;
        const bool true_pos = truth[i] == positive_class;
        if (pred_pos && true_pos) ++r.tp;
        else if (pred_pos && !true_pos) ++r.fp;
        else if (!pred_pos && true_pos) ++r.fn;
        else ++r.tn;
    }
    const double total = static_cast<double>(r.tp + r.fp + r.tn + r.fn);
    r.accuracy = static_cast<double>(r.tp + r.tn) / total;
    r.precision = (r.tp + r.fp) > 0 ? static_cast<double>(r.tp) / (r.tp + r.fp) : 0.0;
    r.recall = (r.tp + r.fn) > 0 ? static_cast<double>(r.tp) / (r.tp + r.fn) : 0.0;
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

}  // namespace storm::harness
