#include "sieformer/block.hpp"

#include <cmath>

#include "sieformer/error.hpp"
#include "sieformer/fft.hpp"
#include "sieformer/graph.hpp"

namespace sieformer {

void BlockConfig::validate() const {
  if (n_tokens == 0) throw ConfigError("block config: n_tokens must be positive");
  if (channels == 0) throw ConfigError("block config: channels must be positive");
  if (embed == 0) throw ConfigError("block config: embed must be positive");
  if (heads == 0) throw ConfigError("block config: heads must be positive");
  if (embed % heads != 0)
    throw ConfigError("block config: heads must divide the embedding width");
}

void BlockParams::zero_grads() {
  auto reset = [](auto& p) {
    using M = std::decay_t<decltype(p.value)>;
    p.grad = p.value.empty() ? M() : M(p.value.rows(), p.value.cols());
  };
  reset(w_q);
  reset(w_k);
  reset(w_v);
  reset(w_z);
  reset(w_p);
  reset(w_r);
  for (auto& c : w_c) reset(c);
  reset(w_b);
}

BlockParams init_block_params(const BlockConfig& config, Rng& rng) {
  config.validate();
  BlockParams p;
  auto gaussian = [&](std::size_t r, std::size_t c, double scale) {
    RealMatrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
    return m;
  };
  const double proj_scale = 1.0 / std::sqrt(static_cast<double>(config.channels));
  const double out_scale = 1.0 / std::sqrt(static_cast<double>(config.embed));
  p.w_q.value = gaussian(config.channels, config.embed, proj_scale);
  p.w_k.value = gaussian(config.channels, config.embed, proj_scale);
  p.w_v.value = gaussian(config.channels, config.embed, proj_scale);
  p.w_z.value = gaussian(config.embed, config.channels, out_scale);
  // Filter branches start at exact pass-through.
  p.w_p.value = RealMatrix(config.embed, config.embed);
  p.w_r.value = RealMatrix(config.embed, config.embed);
  p.w_c.resize(config.heads);
  for (auto& c : p.w_c)
    c.value = ComplexMatrix(config.n_tokens, config.head_dim(), {1.0, 0.0});
  if (config.bias_ablation) p.w_b.value = RealMatrix(config.n_tokens, config.embed);
  p.zero_grads();
  return p;
}

namespace {

void check_params(const BlockConfig& config, const BlockParams& params) {
  auto expect = [](const RealMatrix& m, std::size_t r, std::size_t c, const char* name) {
    if (m.rows() != r || m.cols() != c)
      throw ParameterError(std::string("block: bad shape for ") + name);
  };
  expect(params.w_q.value, config.channels, config.embed, "w_q");
  expect(params.w_k.value, config.channels, config.embed, "w_k");
  expect(params.w_v.value, config.channels, config.embed, "w_v");
  expect(params.w_z.value, config.embed, config.channels, "w_z");
  expect(params.w_p.value, config.embed, config.embed, "w_p");
  expect(params.w_r.value, config.embed, config.embed, "w_r");
  if (params.w_c.size() != config.heads)
    throw ParameterError("block: w_c must hold one mask per head");
  for (const auto& c : params.w_c)
    if (c.value.rows() != config.n_tokens || c.value.cols() != config.head_dim())
      throw ParameterError("block: bad shape for w_c mask");
  if (config.bias_ablation)
    expect(params.w_b.value, config.n_tokens, config.embed, "w_b");
}

RealMatrix head_selector(std::size_t embed, std::size_t head_dim, std::size_t h) {
  RealMatrix s(embed, head_dim);
  for (std::size_t j = 0; j < head_dim; ++j) s(h * head_dim + j, j) = 1.0;
  return s;
}

BlockForward forward_impl(const RealMatrix& x, const BlockConfig& config,
                          const BlockParams& params, bool with_filters) {
  config.validate();
  check_params(config, params);
  if (x.rows() != config.n_tokens || x.cols() != config.channels)
    throw DimensionError("block: input must be n_tokens x channels");
  if (!all_finite(x)) throw NumericError("block: non-finite input");

  BlockForward f;
  Tape& t = f.tape;
  const NodeId xid = t.input(x);
  f.w_q = t.parameter(params.w_q.value, params.w_q.requires_grad);
  f.w_k = t.parameter(params.w_k.value, params.w_k.requires_grad);
  f.w_v = t.parameter(params.w_v.value, params.w_v.requires_grad);
  f.w_z = t.parameter(params.w_z.value, params.w_z.requires_grad && !config.freeze_wz);

  const NodeId q = t.matmul(xid, f.w_q);
  const NodeId k = t.matmul(xid, f.w_k);
  const NodeId v = t.matmul(xid, f.w_v);
  f.values_flat = v;

  // Explicit branch: per-head attention over (optionally) modulated values.
  const std::size_t head_dim = config.head_dim();
  const double attn_scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  NodeId exp_acc = 0;
  for (std::size_t h = 0; h < config.heads; ++h) {
    const RealMatrix sel = head_selector(config.embed, head_dim, h);
    const NodeId sel_id = t.input(sel);
    const NodeId sel_t_id = t.input(transpose(sel));
    const NodeId qh = t.matmul(q, sel_id);
    const NodeId kh = t.matmul(k, sel_id);
    NodeId vh = t.matmul(v, sel_id);
    if (with_filters) {
      f.w_c.push_back(t.parameter(params.w_c[h].value, params.w_c[h].requires_grad));
      vh = t.real_part(t.ifft2(t.hadamard(t.fft2(t.complexify(vh)), f.w_c.back())));
    }
    const NodeId attn = t.softmax_rows(t.scale(t.matmul(qh, t.transpose(kh)), attn_scale));
    const NodeId scattered = t.matmul(t.matmul(attn, vh), sel_t_id);
    exp_acc = h == 0 ? scattered : t.add(exp_acc, scattered);
  }

  NodeId mix = exp_acc;
  if (with_filters) {
    // Implicit branch: quadratic band filters over the token graph built
    // from the flat (headless) projections.
    f.w_p = t.parameter(params.w_p.value, params.w_p.requires_grad);
    f.w_r = t.parameter(params.w_r.value, params.w_r.requires_grad);
    const double affinity_scale = 1.0 / std::sqrt(static_cast<double>(config.embed));
    const NodeId m = t.scale(t.matmul(q, t.transpose(k)), affinity_scale);
    const NodeId m_bar = t.relu(t.scale(t.add(m, t.transpose(m)), 0.5));
    const NodeId a_norm = t.symmetric_normalize(m_bar, kDegreeEpsilon);
    const NodeId aav = t.matmul(a_norm, t.matmul(a_norm, v));
    NodeId filt = t.add(t.matmul(aav, f.w_p),
                        t.matmul(t.add(aav, t.scale(v, -1.0)), f.w_r));
    if (config.bias_ablation) {
      f.w_b = t.parameter(params.w_b.value, params.w_b.requires_grad);
      f.has_bias = true;
      filt = t.add(filt, f.w_b);
    }
    f.filter_out = filt;
    f.has_filter = true;
    mix = t.add(exp_acc, filt);
  }

  f.output = t.add(xid, t.matmul(mix, f.w_z));
  return f;
}

}  // namespace

QkvProjection qkv_project(const RealMatrix& x, const BlockConfig& config,
                          const BlockParams& params) {
  config.validate();
  check_params(config, params);
  if (x.rows() != config.n_tokens || x.cols() != config.channels)
    throw DimensionError("qkv_project: input must be n_tokens x channels");
  return {matmul(x, params.w_q.value), matmul(x, params.w_k.value),
          matmul(x, params.w_v.value)};
}

RealMatrix multi_head_attention(const RealMatrix& q, const RealMatrix& k,
                                const RealMatrix& v, std::size_t heads) {
  if (!q.same_shape(k) || !q.same_shape(v) || q.empty())
    throw DimensionError("multi_head_attention: Q, K, V must share a non-empty shape");
  if (heads == 0 || q.cols() % heads != 0)
    throw DimensionError("multi_head_attention: heads must divide the width");

  const std::size_t n = q.rows();
  const std::size_t head_dim = q.cols() / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  RealMatrix out(n, q.cols());
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t base = h * head_dim;
    for (std::size_t i = 0; i < n; ++i) {
      // Row of scaled logits for this head.
      std::vector<double> logits(n);
      double row_max = -1e300;
      for (std::size_t j = 0; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t d = 0; d < head_dim; ++d) dot += q(i, base + d) * k(j, base + d);
        logits[j] = dot * scale;
        row_max = std::max(row_max, logits[j]);
      }
      double denom = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        logits[j] = std::exp(logits[j] - row_max);
        denom += logits[j];
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double w = logits[j] / denom;
        for (std::size_t d = 0; d < head_dim; ++d) out(i, base + d) += w * v(j, base + d);
      }
    }
  }
  return out;
}

RealMatrix mfl_apply(const RealMatrix& v, const std::vector<ComplexMatrix>& w_c,
                     std::size_t heads) {
  if (heads == 0 || v.cols() % heads != 0)
    throw DimensionError("mfl_apply: heads must divide the width");
  if (w_c.size() != heads)
    throw ParameterError("mfl_apply: need exactly one mask per head");
  const std::size_t head_dim = v.cols() / heads;

  RealMatrix out(v.rows(), v.cols());
  for (std::size_t h = 0; h < heads; ++h) {
    if (w_c[h].rows() != v.rows() || w_c[h].cols() != head_dim)
      throw ParameterError("mfl_apply: mask shape must be n_tokens x head_dim");
    ComplexMatrix slice(v.rows(), head_dim);
    for (std::size_t i = 0; i < v.rows(); ++i)
      for (std::size_t d = 0; d < head_dim; ++d)
        slice(i, d) = {v(i, h * head_dim + d), 0.0};
    const ComplexMatrix filtered = ifft2(hadamard(fft2(slice), w_c[h]));
    for (std::size_t i = 0; i < v.rows(); ++i)
      for (std::size_t d = 0; d < head_dim; ++d)
        out(i, h * head_dim + d) = filtered(i, d).real();
  }
  return out;
}

BlockForward sieformer_block_forward(const RealMatrix& x, const BlockConfig& config,
                                     const BlockParams& params) {
  return forward_impl(x, config, params, true);
}

BlockForward baseline_block_forward(const RealMatrix& x, const BlockConfig& config,
                                    const BlockParams& params) {
  return forward_impl(x, config, params, false);
}

void block_backward(BlockForward& fwd, const RealMatrix& upstream, BlockParams& params) {
  if (fwd.tape.empty()) throw StateError("block_backward: no recorded forward pass");
  fwd.tape.backward(fwd.output, upstream);

  auto add_real = [&](Param<RealMatrix>& p, NodeId id) {
    if (!p.requires_grad) return;
    const RealMatrix& g = fwd.tape.grad(id);
    if (g.empty()) return;
    if (p.grad.empty()) p.grad = RealMatrix(p.value.rows(), p.value.cols());
    p.grad += g;
  };
  add_real(params.w_q, fwd.w_q);
  add_real(params.w_k, fwd.w_k);
  add_real(params.w_v, fwd.w_v);
  add_real(params.w_z, fwd.w_z);
  if (fwd.has_filter) {
    add_real(params.w_p, fwd.w_p);
    add_real(params.w_r, fwd.w_r);
    for (std::size_t h = 0; h < fwd.w_c.size(); ++h) {
      auto& p = params.w_c[h];
      if (!p.requires_grad) continue;
      const ComplexMatrix& g = fwd.tape.cgrad(fwd.w_c[h]);
      if (g.empty()) continue;
      if (p.grad.empty()) p.grad = ComplexMatrix(p.value.rows(), p.value.cols());
      p.grad += g;
    }
    if (fwd.has_bias) add_real(params.w_b, fwd.w_b);
  }
}

std::vector<NamedTensor> pack_block_params(const BlockConfig& config,
                                           const BlockParams& params) {
  check_params(config, params);
  std::vector<NamedTensor> tensors;
  auto pack_real = [&](const char* name, const RealMatrix& m) {
    NamedTensor t;
    t.name = name;
    t.dims = {m.rows(), m.cols()};
    t.real_data.assign(m.data(), m.data() + m.size());
    tensors.push_back(std::move(t));
  };
  pack_real("w_q", params.w_q.value);
  pack_real("w_k", params.w_k.value);
  pack_real("w_v", params.w_v.value);
  pack_real("w_z", params.w_z.value);
  pack_real("w_p", params.w_p.value);
  pack_real("w_r", params.w_r.value);

  NamedTensor wc;
  wc.name = "w_c";
  wc.complex_valued = true;
  wc.dims = {config.heads, config.n_tokens, config.head_dim()};
  for (const auto& c : params.w_c)
    wc.complex_data.insert(wc.complex_data.end(), c.value.data(),
                           c.value.data() + c.value.size());
  tensors.push_back(std::move(wc));

  if (config.bias_ablation) pack_real("w_b", params.w_b.value);
  return tensors;
}

void unpack_block_params(const std::vector<NamedTensor>& tensors,
                         const BlockConfig& config, BlockParams& params) {
  config.validate();
  auto find = [&](const std::string& name) -> const NamedTensor& {
    for (const NamedTensor& t : tensors)
      if (t.name == name) return t;
    throw IoError("checkpoint: missing tensor " + name);
  };
  auto unpack_real = [&](const char* name, std::size_t r, std::size_t c) {
    const NamedTensor& t = find(name);
    if (t.complex_valued || t.dims.size() != 2 || t.dims[0] != r || t.dims[1] != c)
      throw IoError(std::string("checkpoint: bad record for ") + name);
    RealMatrix m(r, c);
    std::copy(t.real_data.begin(), t.real_data.end(), m.data());
    return m;
  };
  params.w_q.value = unpack_real("w_q", config.channels, config.embed);
  params.w_k.value = unpack_real("w_k", config.channels, config.embed);
  params.w_v.value = unpack_real("w_v", config.channels, config.embed);
  params.w_z.value = unpack_real("w_z", config.embed, config.channels);
  params.w_p.value = unpack_real("w_p", config.embed, config.embed);
  params.w_r.value = unpack_real("w_r", config.embed, config.embed);

  const NamedTensor& wc = find("w_c");
  if (!wc.complex_valued || wc.dims.size() != 3 || wc.dims[0] != config.heads ||
      wc.dims[1] != config.n_tokens || wc.dims[2] != config.head_dim())
    throw IoError("checkpoint: bad record for w_c");
  params.w_c.assign(config.heads, {});
  const std::size_t per_head = config.n_tokens * config.head_dim();
  for (std::size_t h = 0; h < config.heads; ++h) {
    params.w_c[h].value = ComplexMatrix(config.n_tokens, config.head_dim());
    std::copy(wc.complex_data.begin() + static_cast<std::ptrdiff_t>(h * per_head),
              wc.complex_data.begin() + static_cast<std::ptrdiff_t>((h + 1) * per_head),
              params.w_c[h].value.data());
  }
  if (config.bias_ablation)
    params.w_b.value = unpack_real("w_b", config.n_tokens, config.embed);
  else
    params.w_b.value = RealMatrix();
  params.zero_grads();
}

}  // namespace sieformer
