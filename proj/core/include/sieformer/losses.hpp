#pragma once

#include <cstddef>
#include <vector>

#include "sieformer/matrix.hpp"

namespace sieformer {

// Losses over L2-normalized embedding rows. Every *_grad variant returns
// dLoss/dEmbedding analytically; the chain into model parameters runs
// through the block tape.

struct ValueWithGrad {
  double value = 0.0;
  RealMatrix grad;
};

struct PairGrad {
  double value = 0.0;
  RealMatrix grad1;
  RealMatrix grad2;
};

// Two-view instance discrimination. Anchors are rows of `z1`; the positive
// of anchor i is z2 row i, negatives are the other z1 rows:
//   L_i = -log exp(z1_i.z2_i/tau) /
//              (exp(z1_i.z2_i/tau) + sum_{j != i} exp(z1_i.z1_j/tau)),
// averaged over anchors. Rows must be unit-norm to 1e-6; batch >= 2.
double info_nce_loss(const RealMatrix& z1, const RealMatrix& z2, double tau);
PairGrad info_nce_loss_grad(const RealMatrix& z1, const RealMatrix& z2, double tau);

// Supervised contrastive loss (mean-of-log-out form): every same-label row
// is a positive, denominators run over all other rows. Anchors without a
// positive are skipped; if no anchor has one the call is rejected.
double supcon_loss(const RealMatrix& z, const std::vector<int>& labels, double tau);
ValueWithGrad supcon_loss_grad(const RealMatrix& z, const std::vector<int>& labels,
                               double tau);

// Scalar mix of the two contrastive terms: (1 - lambda) * unsup + lambda * sup.
double combined_loss(double unsup, double sup, double lambda);

// Full batch objective whose value is combined_loss(info_nce, supcon, lambda).
// `labels[i]` is the class of sample i or -1 when unlabeled. The supervised
// term stacks both views of the labeled rows (so every labeled anchor keeps
// its cross-view positive); with no labeled rows it contributes zero.
double contrastive_objective(const RealMatrix& z1, const RealMatrix& z2,
                             const std::vector<int>& labels, double lambda,
                             double tau_u, double tau_c);
PairGrad contrastive_objective_grad(const RealMatrix& z1, const RealMatrix& z2,
                                    const std::vector<int>& labels, double lambda,
                                    double tau_u, double tau_c);

// Classification-head objective: sharpened-teacher cross-entropy on
// unlabeled rows, standard cross-entropy on labeled rows, minus
// me_max_weight times the entropy of the mean student prediction.
// `labels[i]` = class or -1 for unlabeled.
double distill_head_loss(const RealMatrix& student_logits,
                         const RealMatrix& teacher_logits,
                         const std::vector<int>& labels, double tau_s, double tau_t,
                         double me_max_weight);

// Cosine decay of the teacher temperature across the warmup window;
// constant at `end` afterwards.
double teacher_temperature(std::size_t epoch, double start = 0.07, double end = 0.04,
                           std::size_t warmup_epochs = 30);

}  // namespace sieformer
