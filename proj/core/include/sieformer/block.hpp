#pragma once

#include <cstddef>
#include <vector>

#include "sieformer/checkpoint.hpp"
#include "sieformer/matrix.hpp"
#include "sieformer/rng.hpp"
#include "sieformer/tape.hpp"

namespace sieformer {

// Static shape of one attention block. The token count is part of the
// contract: inputs with a different N are rejected.
struct BlockConfig {
  std::size_t n_tokens = 0;  // N
  std::size_t channels = 0;  // C
  std::size_t embed = 0;     // C_e
  std::size_t heads = 1;     // h, must divide embed

  bool bias_ablation = false;  // adds W_B to the filter branch
  bool freeze_wz = false;      // exclude W_Z from gradient updates

  std::size_t head_dim() const { return embed / heads; }
  void validate() const;  // throws ConfigError
};

// Learnable tensor with its gradient slot.
template <typename M>
struct Param {
  M value;
  M grad;
  bool requires_grad = true;
};

// Block weights. Projections act on the right of row-token matrices:
//   w_q/w_k/w_v: C x C_e, w_z: C_e x C, w_p/w_r: C_e x C_e,
//   w_c: one complex N x head_dim mask per head, w_b: N x C_e (ablation).
struct BlockParams {
  Param<RealMatrix> w_q, w_k, w_v, w_z, w_p, w_r;
  std::vector<Param<ComplexMatrix>> w_c;
  Param<RealMatrix> w_b;

  void zero_grads();
};

// Projections draw from N(0, 1/fan_in); both filter branches start at
// exact pass-through (w_p = w_r = 0, w_c = 1 + 0i) so a freshly
// initialized block reproduces the plain attention block.
BlockParams init_block_params(const BlockConfig& config, Rng& rng);

// --- pure reference ops (no tape) -------------------------------------------

struct QkvProjection {
  RealMatrix q, k, v;  // each N x C_e
};

QkvProjection qkv_project(const RealMatrix& x, const BlockConfig& config,
                          const BlockParams& params);

// Per-head softmax(Q_h K_h^T / sqrt(head_dim)) V_h, heads concatenated.
RealMatrix multi_head_attention(const RealMatrix& q, const RealMatrix& k,
                                const RealMatrix& v, std::size_t heads);

// Per-head frequency modulation: Re(ifft2(fft2(V_h) * w_c[h])).
RealMatrix mfl_apply(const RealMatrix& v, const std::vector<ComplexMatrix>& w_c,
                     std::size_t heads);

// --- block forward / backward -----------------------------------------------

// Recorded forward pass. Holds the tape plus node handles needed for the
// backward pass and for inspecting intermediate values.
struct BlockForward {
  Tape tape;
  NodeId output = 0;       // N x C
  NodeId values_flat = 0;  // V before any filtering, N x C_e
  NodeId filter_out = 0;   // adjacency-filter branch output, N x C_e
  bool has_filter = false;
  bool has_bias = false;

  NodeId w_q = 0, w_k = 0, w_v = 0, w_z = 0, w_p = 0, w_r = 0, w_b = 0;
  std::vector<NodeId> w_c;

  const RealMatrix& y() const { return tape.value(output); }
};

// Dual-branch block:
//   Y = X + (MHA(Q, K, MFL(V)) + FilterBranch(A~, V)) W_Z
// where A~ is the degree-normalized rectified affinity of the flat Q, K
// (scale sqrt(C_e)) and FilterBranch = A~^2 V w_p + (A~^2 - I) V w_r
// (+ w_b under bias ablation).
BlockForward sieformer_block_forward(const RealMatrix& x, const BlockConfig& config,
                                     const BlockParams& params);

// Plain residual attention block with the same weights:
//   Y = X + MHA(Q, K, V) W_Z.
BlockForward baseline_block_forward(const RealMatrix& x, const BlockConfig& config,
                                    const BlockParams& params);

// Accumulates dLoss/dParam into the grad slots given dLoss/dY. Frozen
// parameters are left untouched. Throws StateError on an empty forward.
void block_backward(BlockForward& fwd, const RealMatrix& upstream, BlockParams& params);

// --- checkpoint packing -------------------------------------------------------

std::vector<NamedTensor> pack_block_params(const BlockConfig& config,
                                           const BlockParams& params);
void unpack_block_params(const std::vector<NamedTensor>& tensors,
                         const BlockConfig& config, BlockParams& params);

}  // namespace sieformer
