#include "sieformer/tape.hpp"

#include <cmath>

#include "sieformer/error.hpp"
#include "sieformer/fft.hpp"

namespace sieformer {

const Tape::Node& Tape::at(NodeId id) const {
  if (id >= nodes_.size()) throw StateError("tape: node id out of range");
  return nodes_[id];
}

Tape::Node& Tape::at(NodeId id) {
  if (id >= nodes_.size()) throw StateError("tape: node id out of range");
  return nodes_[id];
}

NodeId Tape::push(Node node) {
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

void Tape::require_real(NodeId id, const char* who) const {
  if (at(id).complex_domain)
    throw StateError(std::string("tape: ") + who + " expects a real node");
}

void Tape::require_complex(NodeId id, const char* who) const {
  if (!at(id).complex_domain)
    throw StateError(std::string("tape: ") + who + " expects a complex node");
}

NodeId Tape::input(RealMatrix value) {
  Node n;
  n.rval = std::move(value);
  return push(std::move(n));
}

NodeId Tape::input(ComplexMatrix value) {
  Node n;
  n.complex_domain = true;
  n.cval = std::move(value);
  return push(std::move(n));
}

NodeId Tape::parameter(RealMatrix value, bool requires_grad) {
  Node n;
  n.requires_grad = requires_grad;
  n.rval = std::move(value);
  return push(std::move(n));
}

NodeId Tape::parameter(ComplexMatrix value, bool requires_grad) {
  Node n;
  n.complex_domain = true;
  n.requires_grad = requires_grad;
  n.cval = std::move(value);
  return push(std::move(n));
}

NodeId Tape::matmul(NodeId a, NodeId b) {
  require_real(a, "matmul");
  require_real(b, "matmul");
  Node n;
  n.op = Op::matmul;
  n.a = a;
  n.b = b;
  n.requires_grad = at(a).requires_grad || at(b).requires_grad;
  n.rval = sieformer::matmul(at(a).rval, at(b).rval);
  return push(std::move(n));
}

NodeId Tape::add(NodeId a, NodeId b) {
  require_real(a, "add");
  require_real(b, "add");
  Node n;
  n.op = Op::add;
  n.a = a;
  n.b = b;
  n.requires_grad = at(a).requires_grad || at(b).requires_grad;
  n.rval = at(a).rval + at(b).rval;
  return push(std::move(n));
}

NodeId Tape::scale(NodeId a, double factor) {
  require_real(a, "scale");
  if (!std::isfinite(factor)) throw ParameterError("tape: non-finite scale factor");
  Node n;
  n.op = Op::scale;
  n.a = a;
  n.scalar = factor;
  n.requires_grad = at(a).requires_grad;
  n.rval = factor * at(a).rval;
  return push(std::move(n));
}

NodeId Tape::transpose(NodeId a) {
  require_real(a, "transpose");
  Node n;
  n.op = Op::transpose;
  n.a = a;
  n.requires_grad = at(a).requires_grad;
  n.rval = sieformer::transpose(at(a).rval);
  return push(std::move(n));
}

NodeId Tape::relu(NodeId a) {
  require_real(a, "relu");
  Node n;
  n.op = Op::relu;
  n.a = a;
  n.requires_grad = at(a).requires_grad;
  n.rval = at(a).rval;
  for (std::size_t i = 0; i < n.rval.size(); ++i)
    if (n.rval.data()[i] < 0.0) n.rval.data()[i] = 0.0;
  return push(std::move(n));
}

NodeId Tape::softmax_rows(NodeId a) {
  require_real(a, "softmax_rows");
  const RealMatrix& x = at(a).rval;
  Node n;
  n.op = Op::softmax;
  n.a = a;
  n.requires_grad = at(a).requires_grad;
  n.rval = RealMatrix(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double row_max = x(i, 0);
    for (std::size_t j = 1; j < x.cols(); ++j) row_max = std::max(row_max, x(i, j));
    double denom = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double e = std::exp(x(i, j) - row_max);
      n.rval(i, j) = e;
      denom += e;
    }
    for (std::size_t j = 0; j < x.cols(); ++j) n.rval(i, j) /= denom;
  }
  return push(std::move(n));
}

NodeId Tape::symmetric_normalize(NodeId a, double epsilon) {
  require_real(a, "symmetric_normalize");
  const RealMatrix& x = at(a).rval;
  if (x.rows() != x.cols())
    throw DimensionError("tape: symmetric_normalize expects a square matrix");
  if (epsilon < 0.0) throw ParameterError("tape: epsilon must be non-negative");
  Node n;
  n.op = Op::symmetric_normalize;
  n.a = a;
  n.scalar = epsilon;
  n.requires_grad = at(a).requires_grad;

  const std::size_t sz = x.rows();
  std::vector<double> inv_sqrt(sz);
  for (std::size_t i = 0; i < sz; ++i) {
    double d = epsilon;
    for (std::size_t j = 0; j < sz; ++j) d += x(i, j);
    if (!(d > 0.0)) throw NumericError("tape: non-positive degree in symmetric_normalize");
    inv_sqrt[i] = 1.0 / std::sqrt(d);
  }
  n.rval = RealMatrix(sz, sz);
  for (std::size_t i = 0; i < sz; ++i)
    for (std::size_t j = 0; j < sz; ++j)
      n.rval(i, j) = inv_sqrt[i] * x(i, j) * inv_sqrt[j];
  return push(std::move(n));
}

NodeId Tape::reduce_sum(NodeId a) {
  require_real(a, "reduce_sum");
  Node n;
  n.op = Op::reduce_sum;
  n.a = a;
  n.requires_grad = at(a).requires_grad;
  n.rval = RealMatrix(1, 1, sum(at(a).rval));
  return push(std::move(n));
}

NodeId Tape::hadamard(NodeId a, NodeId b) {
  if (at(a).complex_domain != at(b).complex_domain)
    throw StateError("tape: hadamard operands must share a domain");
  Node n;
  n.a = a;
  n.b = b;
  n.requires_grad = at(a).requires_grad || at(b).requires_grad;
  if (at(a).complex_domain) {
    n.op = Op::hadamard_complex;
    n.complex_domain = true;
    n.cval = sieformer::hadamard(at(a).cval, at(b).cval);
  } else {
    n.op = Op::hadamard_real;
    n.rval = sieformer::hadamard(at(a).rval, at(b).rval);
  }
  return push(std::move(n));
}

NodeId Tape::complexify(NodeId a) {
  require_real(a, "complexify");
  Node n;
  n.op = Op::complexify;
  n.complex_domain = true;
  n.a = a;
  n.requires_grad = at(a).requires_grad;
  n.cval = to_complex(at(a).rval);
  return push(std::move(n));
}

NodeId Tape::fft2(NodeId a) {
  require_complex(a, "fft2");
  Node n;
  n.op = Op::fft2;
  n.complex_domain = true;
  n.a = a;
  n.requires_grad = at(a).requires_grad;
  n.cval = sieformer::fft2(at(a).cval);
  return push(std::move(n));
}

NodeId Tape::ifft2(NodeId a) {
  require_complex(a, "ifft2");
  Node n;
  n.op = Op::ifft2;
  n.complex_domain = true;
  n.a = a;
  n.requires_grad = at(a).requires_grad;
  n.cval = sieformer::ifft2(at(a).cval);
  return push(std::move(n));
}

NodeId Tape::real_part(NodeId a) {
  require_complex(a, "real_part");
  Node n;
  n.op = Op::real_part;
  n.a = a;
  n.requires_grad = at(a).requires_grad;
  n.rval = sieformer::real_part(at(a).cval);
  return push(std::move(n));
}

bool Tape::is_complex(NodeId id) const { return at(id).complex_domain; }

const RealMatrix& Tape::value(NodeId id) const {
  require_real(id, "value");
  return at(id).rval;
}

const ComplexMatrix& Tape::cvalue(NodeId id) const {
  require_complex(id, "cvalue");
  return at(id).cval;
}

RealMatrix& Tape::racc(NodeId id) {
  Node& n = at(id);
  if (n.rgrad.empty()) n.rgrad = RealMatrix(n.rval.rows(), n.rval.cols());
  return n.rgrad;
}

ComplexMatrix& Tape::cacc(NodeId id) {
  Node& n = at(id);
  if (n.cgrad.empty()) n.cgrad = ComplexMatrix(n.cval.rows(), n.cval.cols());
  return n.cgrad;
}

void Tape::backward(NodeId output, const RealMatrix& upstream) {
  const Node& out = at(output);
  if (out.complex_domain)
    throw StateError("tape: backward must start from a real node");
  if (upstream.rows() != out.rval.rows() || upstream.cols() != out.rval.cols())
    throw DimensionError("tape: upstream gradient shape mismatch");
  if (!all_finite(upstream)) throw NumericError("tape: non-finite upstream gradient");

  for (Node& n : nodes_) {
    n.rgrad = RealMatrix();
    n.cgrad = ComplexMatrix();
  }
  racc(output) += upstream;
  for (NodeId id = output + 1; id-- > 0;) {
    if (at(id).requires_grad) backward_step(id);
  }
  ran_backward_ = true;
}

void Tape::backward_step(NodeId id) {
  Node& n = at(id);
  switch (n.op) {
    case Op::leaf:
      return;
    case Op::matmul: {
      if (n.rgrad.empty()) return;
      if (at(n.a).requires_grad) racc(n.a) += sieformer::matmul(n.rgrad, sieformer::transpose(at(n.b).rval));
      if (at(n.b).requires_grad) racc(n.b) += sieformer::matmul(sieformer::transpose(at(n.a).rval), n.rgrad);
      return;
    }
    case Op::add: {
      if (n.rgrad.empty()) return;
      if (at(n.a).requires_grad) racc(n.a) += n.rgrad;
      if (at(n.b).requires_grad) racc(n.b) += n.rgrad;
      return;
    }
    case Op::scale: {
      if (n.rgrad.empty()) return;
      if (at(n.a).requires_grad) racc(n.a) += n.scalar * n.rgrad;
      return;
    }
    case Op::transpose: {
      if (n.rgrad.empty()) return;
      if (at(n.a).requires_grad) racc(n.a) += sieformer::transpose(n.rgrad);
      return;
    }
    case Op::relu: {
      if (n.rgrad.empty() || !at(n.a).requires_grad) return;
      const RealMatrix& x = at(n.a).rval;
      RealMatrix& ga = racc(n.a);
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x.data()[i] > 0.0) ga.data()[i] += n.rgrad.data()[i];
      return;
    }
    case Op::softmax: {
      if (n.rgrad.empty() || !at(n.a).requires_grad) return;
      const RealMatrix& y = n.rval;
      RealMatrix& ga = racc(n.a);
      for (std::size_t i = 0; i < y.rows(); ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < y.cols(); ++j) dot += n.rgrad(i, j) * y(i, j);
        for (std::size_t j = 0; j < y.cols(); ++j)
          ga(i, j) += y(i, j) * (n.rgrad(i, j) - dot);
      }
      return;
    }
    case Op::symmetric_normalize: {
      if (n.rgrad.empty() || !at(n.a).requires_grad) return;
      const RealMatrix& x = at(n.a).rval;
      const std::size_t sz = x.rows();
      std::vector<double> inv_sqrt(sz);
      for (std::size_t i = 0; i < sz; ++i) {
        double d = n.scalar;
        for (std::size_t j = 0; j < sz; ++j) d += x(i, j);
        inv_sqrt[i] = 1.0 / std::sqrt(d);
      }
      // Perturbing x_kl shifts degree d_k, which rescales both row k and
      // column k of the output; r/c collect those two sweeps.
      std::vector<double> row_mix(sz, 0.0), col_mix(sz, 0.0);
      for (std::size_t i = 0; i < sz; ++i)
        for (std::size_t j = 0; j < sz; ++j) {
          const double gx = n.rgrad(i, j) * x(i, j);
          row_mix[i] += gx * inv_sqrt[j];
          col_mix[j] += gx * inv_sqrt[i];
        }
      RealMatrix& ga = racc(n.a);
      for (std::size_t k = 0; k < sz; ++k) {
        const double s3 = inv_sqrt[k] * inv_sqrt[k] * inv_sqrt[k];
        const double corr = -0.5 * s3 * (row_mix[k] + col_mix[k]);
        for (std::size_t l = 0; l < sz; ++l)
          ga(k, l) += inv_sqrt[k] * inv_sqrt[l] * n.rgrad(k, l) + corr;
      }
      return;
    }
    case Op::reduce_sum: {
      if (n.rgrad.empty() || !at(n.a).requires_grad) return;
      const double g = n.rgrad(0, 0);
      RealMatrix& ga = racc(n.a);
      for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += g;
      return;
    }
    case Op::hadamard_real: {
      if (n.rgrad.empty()) return;
      if (at(n.a).requires_grad) racc(n.a) += sieformer::hadamard(n.rgrad, at(n.b).rval);
      if (at(n.b).requires_grad) racc(n.b) += sieformer::hadamard(n.rgrad, at(n.a).rval);
      return;
    }
    case Op::hadamard_complex: {
      if (n.cgrad.empty()) return;
      if (at(n.a).requires_grad)
        cacc(n.a) += sieformer::hadamard(n.cgrad, conjugate(at(n.b).cval));
      if (at(n.b).requires_grad)
        cacc(n.b) += sieformer::hadamard(n.cgrad, conjugate(at(n.a).cval));
      return;
    }
    case Op::complexify: {
      if (n.cgrad.empty() || !at(n.a).requires_grad) return;
      racc(n.a) += sieformer::real_part(n.cgrad);
      return;
    }
    case Op::fft2: {
      if (n.cgrad.empty() || !at(n.a).requires_grad) return;
      // Adjoint of the unnormalized DFT: F^H g = conj(F conj(g)).
      cacc(n.a) += conjugate(sieformer::fft2(conjugate(n.cgrad)));
      return;
    }
    case Op::ifft2: {
      if (n.cgrad.empty() || !at(n.a).requires_grad) return;
      const double s = 1.0 / static_cast<double>(n.cval.rows() * n.cval.cols());
      cacc(n.a) += std::complex<double>(s, 0.0) * sieformer::fft2(n.cgrad);
      return;
    }
    case Op::real_part: {
      if (n.rgrad.empty() || !at(n.a).requires_grad) return;
      cacc(n.a) += to_complex(n.rgrad);
      return;
    }
  }
}

const RealMatrix& Tape::grad(NodeId id) const {
  if (!ran_backward_) throw StateError("tape: gradient requested before backward");
  const Node& n = at(id);
  if (n.complex_domain) throw StateError("tape: node holds a complex gradient");
  if (n.rgrad.empty()) {
    static const RealMatrix kEmpty;
    return kEmpty;
  }
  return n.rgrad;
}

const ComplexMatrix& Tape::cgrad(NodeId id) const {
  if (!ran_backward_) throw StateError("tape: gradient requested before backward");
  const Node& n = at(id);
  if (!n.complex_domain) throw StateError("tape: node holds a real gradient");
  if (n.cgrad.empty()) {
    static const ComplexMatrix kEmpty;
    return kEmpty;
  }
  return n.cgrad;
}

}  // namespace sieformer
