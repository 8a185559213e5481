#include "sieformer/losses.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "sieformer/error.hpp"

namespace sieformer {

namespace {

constexpr double kUnitNormTolerance = 1e-6;

void check_embeddings(const RealMatrix& z, const char* what) {
  if (z.rows() < 2) {
    throw ContractError(std::string(what) + ": need at least 2 rows");
  }
  if (z.cols() == 0) {
    throw ContractError(std::string(what) + ": rows are empty");
  }
  if (!all_finite(z)) {
    throw NumericError(std::string(what) + ": non-finite embedding");
  }
  for (std::size_t i = 0; i < z.rows(); ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < z.cols(); ++k) sq += z(i, k) * z(i, k);
    if (std::abs(std::sqrt(sq) - 1.0) > kUnitNormTolerance) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%s: row %zu is not unit-norm (|row| = %.9g)",
                    what, i, std::sqrt(sq));
      throw ContractError(buf);
    }
  }
}

void check_tau(double tau, const char* what) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ParameterError(std::string(what) + ": temperature must be positive");
  }
}

double dot_rows(const RealMatrix& a, std::size_t i, const RealMatrix& b, std::size_t j) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(j, k);
  return s;
}

void axpy_row(RealMatrix& out, std::size_t row, double coeff, const RealMatrix& src,
              std::size_t src_row) {
  for (std::size_t k = 0; k < out.cols(); ++k) out(row, k) += coeff * src(src_row, k);
}

// Stable log-softmax of one logits row at temperature tau.
std::vector<double> log_softmax_row(const RealMatrix& logits, std::size_t row,
                                    double tau) {
  std::size_t n = logits.cols();
  std::vector<double> out(n);
  double hi = logits(row, 0);
  for (std::size_t k = 1; k < n; ++k) hi = std::max(hi, logits(row, k));
  double denom = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = (logits(row, k) - hi) / tau;
    denom += std::exp(out[k]);
  }
  double log_denom = std::log(denom);
  for (std::size_t k = 0; k < n; ++k) out[k] -= log_denom;
  return out;
}

}  // namespace

PairGrad info_nce_loss_grad(const RealMatrix& z1, const RealMatrix& z2, double tau) {
  if (!z1.same_shape(z2)) {
    throw DimensionError("info_nce_loss: view shapes differ");
  }
  check_embeddings(z1, "info_nce_loss view 1");
  check_embeddings(z2, "info_nce_loss view 2");
  check_tau(tau, "info_nce_loss");

  std::size_t batch = z1.rows();
  PairGrad result;
  result.grad1 = RealMatrix(batch, z1.cols());
  result.grad2 = RealMatrix(batch, z1.cols());

  double total = 0.0;
  std::vector<double> weights(batch);
  for (std::size_t i = 0; i < batch; ++i) {
    // Stabilize by the largest similarity before exponentiating.
    double s_pos = dot_rows(z1, i, z2, i) / tau;
    double hi = s_pos;
    for (std::size_t j = 0; j < batch; ++j) {
      if (j == i) continue;
      weights[j] = dot_rows(z1, i, z1, j) / tau;
      hi = std::max(hi, weights[j]);
    }
    double e_pos = std::exp(s_pos - hi);
    double denom = e_pos;
    for (std::size_t j = 0; j < batch; ++j) {
      if (j == i) continue;
      weights[j] = std::exp(weights[j] - hi);
      denom += weights[j];
    }
    total += -(s_pos - hi) + std::log(denom);

    double c_pos = (e_pos / denom - 1.0) / tau;
    axpy_row(result.grad1, i, c_pos, z2, i);
    axpy_row(result.grad2, i, c_pos, z1, i);
    for (std::size_t j = 0; j < batch; ++j) {
      if (j == i) continue;
      double c_neg = weights[j] / denom / tau;
      axpy_row(result.grad1, i, c_neg, z1, j);
      axpy_row(result.grad1, j, c_neg, z1, i);
    }
  }

  double inv = 1.0 / static_cast<double>(batch);
  result.value = total * inv;
  result.grad1 *= inv;
  result.grad2 *= inv;
  return result;
}

double info_nce_loss(const RealMatrix& z1, const RealMatrix& z2, double tau) {
  return info_nce_loss_grad(z1, z2, tau).value;
}

ValueWithGrad supcon_loss_grad(const RealMatrix& z, const std::vector<int>& labels,
                               double tau) {
  check_embeddings(z, "supcon_loss");
  check_tau(tau, "supcon_loss");
  if (labels.size() != z.rows()) {
    throw DimensionError("supcon_loss: one label per row required");
  }

  std::size_t n = z.rows();
  std::vector<std::size_t> positives(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && labels[j] == labels[i]) ++positives[i];
    }
  }
  std::size_t anchors = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (positives[i] > 0) ++anchors;
  }
  if (anchors == 0) {
    throw ContractError("supcon_loss: no anchor has a same-label positive");
  }

  ValueWithGrad result;
  result.grad = RealMatrix(n, z.cols());
  double total = 0.0;
  std::vector<double> expsim(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (positives[i] == 0) continue;
    double hi = -1.0 / tau;  // similarities live in [-1, 1]
    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      expsim[a] = dot_rows(z, i, z, a) / tau;
      hi = std::max(hi, expsim[a]);
    }
    double denom = 0.0;
    double pos_sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      if (labels[a] == labels[i]) pos_sum += expsim[a];
      expsim[a] = std::exp(expsim[a] - hi);
      denom += expsim[a];
    }
    double inv_pos = 1.0 / static_cast<double>(positives[i]);
    total += std::log(denom) + hi - pos_sum * inv_pos;

    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      double coeff = expsim[a] / denom / tau;
      if (labels[a] == labels[i]) coeff -= inv_pos / tau;
      axpy_row(result.grad, i, coeff, z, a);
      axpy_row(result.grad, a, coeff, z, i);
    }
  }

  double inv = 1.0 / static_cast<double>(anchors);
  result.value = total * inv;
  result.grad *= inv;
  return result;
}

double supcon_loss(const RealMatrix& z, const std::vector<int>& labels, double tau) {
  return supcon_loss_grad(z, labels, tau).value;
}

double combined_loss(double unsup, double sup, double lambda) {
  if (!std::isfinite(unsup) || !std::isfinite(sup)) {
    throw NumericError("combined_loss: non-finite term");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ParameterError("combined_loss: lambda must lie in [0, 1]");
  }
  return (1.0 - lambda) * unsup + lambda * sup;
}

PairGrad contrastive_objective_grad(const RealMatrix& z1, const RealMatrix& z2,
                                    const std::vector<int>& labels, double lambda,
                                    double tau_u, double tau_c) {
  if (labels.size() != z1.rows()) {
    throw DimensionError("contrastive_objective: one label per sample required");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ParameterError("contrastive_objective: lambda must lie in [0, 1]");
  }

  PairGrad result = info_nce_loss_grad(z1, z2, tau_u);
  double unsup_weight = 1.0 - lambda;
  result.value *= unsup_weight;
  result.grad1 *= unsup_weight;
  result.grad2 *= unsup_weight;

  std::vector<std::size_t> labeled;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= 0) labeled.push_back(i);
  }
  if (labeled.empty() || lambda == 0.0) return result;

  // Stack both views of the labeled rows so each anchor keeps its
  // cross-view positive even when its class appears once in the batch.
  std::size_t m = labeled.size();
  RealMatrix stacked(2 * m, z1.cols());
  std::vector<int> stacked_labels(2 * m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < z1.cols(); ++k) {
      stacked(r, k) = z1(labeled[r], k);
      stacked(m + r, k) = z2(labeled[r], k);
    }
    stacked_labels[r] = labels[labeled[r]];
    stacked_labels[m + r] = labels[labeled[r]];
  }

  ValueWithGrad sup = supcon_loss_grad(stacked, stacked_labels, tau_c);
  result.value += lambda * sup.value;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k < z1.cols(); ++k) {
      result.grad1(labeled[r], k) += lambda * sup.grad(r, k);
      result.grad2(labeled[r], k) += lambda * sup.grad(m + r, k);
    }
  }
  return result;
}

double contrastive_objective(const RealMatrix& z1, const RealMatrix& z2,
                             const std::vector<int>& labels, double lambda,
                             double tau_u, double tau_c) {
  return contrastive_objective_grad(z1, z2, labels, lambda, tau_u, tau_c).value;
}

double distill_head_loss(const RealMatrix& student_logits,
                         const RealMatrix& teacher_logits,
                         const std::vector<int>& labels, double tau_s, double tau_t,
                         double me_max_weight) {
  if (!student_logits.same_shape(teacher_logits)) {
    throw DimensionError("distill_head_loss: student/teacher shapes differ");
  }
  if (student_logits.rows() == 0 || student_logits.cols() < 2) {
    throw DimensionError("distill_head_loss: need rows and at least 2 classes");
  }
  if (labels.size() != student_logits.rows()) {
    throw DimensionError("distill_head_loss: one label per row required");
  }
  check_tau(tau_s, "distill_head_loss student");
  check_tau(tau_t, "distill_head_loss teacher");
  if (!(me_max_weight >= 0.0) || !std::isfinite(me_max_weight)) {
    throw ParameterError("distill_head_loss: me_max_weight must be >= 0");
  }
  if (!all_finite(student_logits) || !all_finite(teacher_logits)) {
    throw NumericError("distill_head_loss: non-finite logits");
  }

  std::size_t n = student_logits.rows();
  std::size_t classes = student_logits.cols();
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] >= static_cast<int>(classes)) {
      throw ParameterError("distill_head_loss: label out of range");
    }
  }

  double unlabeled_sum = 0.0;
  std::size_t unlabeled = 0;
  double labeled_sum = 0.0;
  std::size_t labeled = 0;
  std::vector<double> mean_p(classes, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> logp = log_softmax_row(student_logits, i, tau_s);
    for (std::size_t k = 0; k < classes; ++k) mean_p[k] += std::exp(logp[k]);
    if (labels[i] < 0) {
      std::vector<double> logq = log_softmax_row(teacher_logits, i, tau_t);
      double ce = 0.0;
      for (std::size_t k = 0; k < classes; ++k) ce -= std::exp(logq[k]) * logp[k];
      unlabeled_sum += ce;
      ++unlabeled;
    } else {
      labeled_sum -= logp[static_cast<std::size_t>(labels[i])];
      ++labeled;
    }
  }

  double loss = 0.0;
  if (unlabeled > 0) loss += unlabeled_sum / static_cast<double>(unlabeled);
  if (labeled > 0) loss += labeled_sum / static_cast<double>(labeled);

  double entropy = 0.0;
  for (std::size_t k = 0; k < classes; ++k) {
    double p = mean_p[k] / static_cast<double>(n);
    entropy -= p * std::log(p);
  }
  return loss - me_max_weight * entropy;
}

double teacher_temperature(std::size_t epoch, double start, double end,
                           std::size_t warmup_epochs) {
  if (!(start > 0.0) || !(end > 0.0)) {
    throw ParameterError("teacher_temperature: temperatures must be positive");
  }
  if (warmup_epochs == 0 || epoch >= warmup_epochs) return end;
  double phase = static_cast<double>(epoch) / static_cast<double>(warmup_epochs);
  return end + (start - end) * 0.5 * (1.0 + std::cos(std::numbers::pi * phase));
}

}  // namespace sieformer
