#include "himix/metrics.hpp"

#include <algorithm>

namespace himix {

ConfusionMatrix confusion(const LabelMap& pred, const LabelMap& truth) {
  if (!pred.same_extent(truth))
    throw DataError("shape mismatch: prediction and truth");
  const int nc = std::max(pred.num_classes(), truth.num_classes());
  ConfusionMatrix cm = ConfusionMatrix::Zero(nc, nc);
  const auto* p = pred.pixels().data();
  const auto* t = truth.pixels().data();
  for (Index i = 0; i < truth.size(); ++i) {
    if (t[i] == kIgnoreLabel || p[i] == kIgnoreLabel)
      continue;
    if (t[i] >= nc || p[i] >= nc)
      throw DataError("class index out of range in confusion");
    ++cm(t[i], p[i]);
  }
  return cm;
}

IouResult miou(const ConfusionMatrix& cm) {
  if (cm.rows() != cm.cols())
    throw DataError("confusion matrix must be square");
  IouResult out;
  out.per_class.resize(static_cast<std::size_t>(cm.rows()));
  const Eigen::VectorXd tp = cm.diagonal().cast<double>();
  const Eigen::VectorXd truth_total = cm.rowwise().sum().cast<double>();
  const Eigen::VectorXd pred_total = cm.colwise().sum().transpose().cast<double>();
  double sum = 0.0;
  int present = 0;
  for (Index c = 0; c < cm.rows(); ++c) {
    const double uni = truth_total(c) + pred_total(c) - tp(c);
    if (uni <= 0.0)
      continue;
    const double iou = tp(c) / uni;
    out.per_class[static_cast<std::size_t>(c)] = iou;
    sum += iou;
    ++present;
  }
  if (present == 0)
    throw DataError("empty metric");
  out.mean = sum / present;
  return out;
}

}  // namespace himix
