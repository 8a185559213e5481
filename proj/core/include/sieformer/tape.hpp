#pragma once

#include <cstddef>
#include <vector>

#include "sieformer/matrix.hpp"

namespace sieformer {

using NodeId = std::size_t;

// Reverse-mode tape over dense matrix nodes. Values are computed eagerly
// at op creation; backward() replays the recorded graph in reverse.
//
// Real and complex nodes share one id space. Complex gradients are stored
// in conjugate coordinates: for a real loss L and node z = x + iy,
// grad(z) = dL/dx + i dL/dy. Under this convention w -= lr * grad(w)
// descends on L, and finite differences on the real and imaginary parts
// match the stored components without any factor.
class Tape {
 public:
  // Constant leaf: gradients never flow into it.
  NodeId input(RealMatrix value);
  NodeId input(ComplexMatrix value);

  // Learnable leaf. With requires_grad = false the node behaves like a
  // constant and its gradient slot stays untouched (freeze contract).
  NodeId parameter(RealMatrix value, bool requires_grad = true);
  NodeId parameter(ComplexMatrix value, bool requires_grad = true);

  NodeId matmul(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  NodeId scale(NodeId a, double factor);
  NodeId transpose(NodeId a);
  NodeId relu(NodeId a);
  NodeId softmax_rows(NodeId a);
  // Degree-normalized adjacency D^{-1/2} A D^{-1/2} with regularized row
  // sums d_i = sum_j A_ij + epsilon; fused op with an exact adjoint.
  NodeId symmetric_normalize(NodeId a, double epsilon);
  NodeId reduce_sum(NodeId a);  // 1x1 result
  NodeId hadamard(NodeId a, NodeId b);
  NodeId complexify(NodeId a);  // real -> complex
  NodeId fft2(NodeId a);        // complex -> complex, unnormalized
  NodeId ifft2(NodeId a);       // complex -> complex, 1/(rows*cols)
  NodeId real_part(NodeId a);   // complex -> real

  bool is_complex(NodeId id) const;
  const RealMatrix& value(NodeId id) const;
  const ComplexMatrix& cvalue(NodeId id) const;

  // Seeds the output gradient and propagates to every gradient-bearing
  // node. Re-entrant: each call resets accumulated gradients first.
  void backward(NodeId output, const RealMatrix& upstream);

  const RealMatrix& grad(NodeId id) const;
  const ComplexMatrix& cgrad(NodeId id) const;

  std::size_t node_count() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

 private:
  enum class Op {
    leaf,
    matmul,
    add,
    scale,
    transpose,
    relu,
    softmax,
    symmetric_normalize,
    reduce_sum,
    hadamard_real,
    hadamard_complex,
    complexify,
    fft2,
    ifft2,
    real_part,
  };

  static constexpr NodeId kNone = static_cast<NodeId>(-1);

  struct Node {
    Op op = Op::leaf;
    bool complex_domain = false;
    bool requires_grad = false;
    NodeId a = kNone;
    NodeId b = kNone;
    double scalar = 0.0;
    RealMatrix rval;
    ComplexMatrix cval;
    RealMatrix rgrad;
    ComplexMatrix cgrad;
  };

  const Node& at(NodeId id) const;
  Node& at(NodeId id);
  NodeId push(Node node);
  void require_real(NodeId id, const char* who) const;
  void require_complex(NodeId id, const char* who) const;
  void backward_step(NodeId id);
  RealMatrix& racc(NodeId id);
  ComplexMatrix& cacc(NodeId id);

  std::vector<Node> nodes_;
  bool ran_backward_ = false;
};

}  // namespace sieformer
