#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <limits>
#include <vector>

#include "sieformer/block.hpp"
#include "sieformer/error.hpp"
#include "sieformer/experiments.hpp"
#include "sieformer/fft.hpp"
#include "sieformer/matrix.hpp"
#include "sieformer/rng.hpp"
#include "sieformer/tape.hpp"
#include "test_util.hpp"

using namespace sieformer;
using namespace sieformer::testutil;

namespace {

// Finite-difference check of dLoss/dParam for a scalar-valued graph builder.
// Rebuilds the graph per probe so every op sees the perturbed value.
double max_fd_rel_error(const RealMatrix& param,
                        const std::function<double(const RealMatrix&)>& loss,
                        const RealMatrix& analytic, double h = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < param.rows(); ++i) {
    for (std::size_t j = 0; j < param.cols(); ++j) {
      RealMatrix plus = param, minus = param;
      plus(i, j) += h;
      minus(i, j) -= h;
      const double fd = (loss(plus) - loss(minus)) / (2.0 * h);
      const double denom = std::max({std::fabs(fd), std::fabs(analytic(i, j)), 1e-10});
      worst = std::max(worst, std::fabs(fd - analytic(i, j)) / denom);
    }
  }
  return worst;
}

// Scalar probe: sum(hadamard(out, r)) for a fixed random R.
double probe(const RealMatrix& out, const RealMatrix& r) {
  return sum(hadamard(out, r));
}

BlockConfig small_config(bool ablation = false) {
  BlockConfig c;
  c.n_tokens = 4;
  c.channels = 5;
  c.embed = 6;
  c.heads = 2;
  c.bias_ablation = ablation;
  return c;
}

}  // namespace

// --- tape mechanics -----------------------------------------------------------

TEST_CASE("tape evaluates eagerly and tracks domains") {
  Tape t;
  NodeId a = t.input(RealMatrix{{1.0, 2.0}, {3.0, 4.0}});
  NodeId b = t.parameter(RealMatrix::identity(2));
  NodeId c = t.matmul(a, b);
  CHECK(max_abs_diff(t.value(c), t.value(a)) == 0.0);
  CHECK_FALSE(t.is_complex(c));

  NodeId z = t.complexify(a);
  CHECK(t.is_complex(z));
  CHECK(t.cvalue(z)(1, 0) == std::complex<double>(3.0, 0.0));
  CHECK(t.node_count() == 4);

  CHECK_THROWS_AS(t.value(z), StateError);       // complex node, real accessor
  CHECK_THROWS_AS(t.cvalue(c), StateError);      // real node, complex accessor
  CHECK_THROWS_AS(t.value(99), StateError);      // out of range
  CHECK_THROWS_AS(t.grad(c), StateError);        // before backward
}

TEST_CASE("tape backward matches finite differences on every real op") {
  Rng rng(7);
  const RealMatrix r = random_matrix(3, 3, rng);
  const RealMatrix w0 = random_matrix(3, 3, rng);

  struct Case {
    const char* name;
    std::function<NodeId(Tape&, NodeId)> build;
  };
  Rng mat_rng(91);
  const RealMatrix ma = random_matrix(3, 3, mat_rng);
  const RealMatrix mb = random_matrix(3, 3, mat_rng);
  const RealMatrix mc = random_matrix(3, 3, mat_rng);
  const std::vector<Case> cases = {
      {"matmul", [&](Tape& t, NodeId w) { return t.matmul(w, t.input(ma)); }},
      {"add", [&](Tape& t, NodeId w) { return t.add(w, t.input(mb)); }},
      {"scale", [](Tape& t, NodeId w) { return t.scale(w, -1.7); }},
      {"transpose", [](Tape& t, NodeId w) { return t.transpose(w); }},
      {"relu", [](Tape& t, NodeId w) { return t.relu(w); }},
      {"softmax", [](Tape& t, NodeId w) { return t.softmax_rows(w); }},
      {"hadamard", [&](Tape& t, NodeId w) { return t.hadamard(w, t.input(mc)); }},
      {"chain", [](Tape& t, NodeId w) {
         return t.relu(t.add(t.matmul(w, t.transpose(w)), t.scale(w, 0.5)));
       }},
  };

  for (const auto& c : cases) {
    CAPTURE(c.name);
    auto loss_at = [&](const RealMatrix& w) {
      Tape t;
      NodeId wid = t.parameter(w);
      NodeId out = c.build(t, wid);
      return probe(t.value(out), r);
    };
    Tape t;
    NodeId wid = t.parameter(w0);
    NodeId out = c.build(t, wid);
    NodeId scalar = t.reduce_sum(t.hadamard(out, t.input(r)));
    t.backward(scalar, RealMatrix{{1.0}});
    CHECK(max_fd_rel_error(w0, loss_at, t.grad(wid)) < 1e-6);
  }
}

TEST_CASE("tape symmetric_normalize gradient is exact") {
  Rng rng(8);
  // Positive symmetric input keeps degrees differentiable.
  RealMatrix base = random_matrix(4, 4, rng);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) base(i, j) = std::fabs(base(i, j)) + 0.2;
  const RealMatrix r = random_matrix(4, 4, rng);

  auto loss_at = [&](const RealMatrix& w) {
    Tape t;
    NodeId wid = t.parameter(w);
    NodeId sym = t.scale(t.add(wid, t.transpose(wid)), 0.5);
    return probe(t.value(t.symmetric_normalize(sym, 1e-8)), r);
  };
  Tape t;
  NodeId wid = t.parameter(base);
  NodeId sym = t.scale(t.add(wid, t.transpose(wid)), 0.5);
  NodeId out = t.symmetric_normalize(sym, 1e-8);
  t.backward(t.reduce_sum(t.hadamard(out, t.input(r))), RealMatrix{{1.0}});
  CHECK(max_fd_rel_error(base, loss_at, t.grad(wid)) < 1e-6);

  Tape bad;
  NodeId neg = bad.input(RealMatrix{{-1.0, 0.0}, {0.0, -1.0}});
  CHECK_THROWS_AS(bad.symmetric_normalize(neg, 0.0), NumericError);
  NodeId rect = bad.input(RealMatrix(2, 3));
  CHECK_THROWS_AS(bad.symmetric_normalize(rect, 1e-8), DimensionError);
}

TEST_CASE("tape complex chain gradient matches componentwise differences") {
  Rng rng(9);
  const RealMatrix vin = random_matrix(4, 3, rng);
  const ComplexMatrix mask0 = random_complex(4, 3, rng);
  const RealMatrix r = random_matrix(4, 3, rng);

  auto loss_at = [&](const ComplexMatrix& mask) {
    Tape t;
    NodeId m = t.parameter(mask);
    NodeId out = t.real_part(t.ifft2(t.hadamard(t.fft2(t.complexify(t.input(vin))), m)));
    return probe(t.value(out), r);
  };

  Tape t;
  NodeId m = t.parameter(mask0);
  NodeId out = t.real_part(t.ifft2(t.hadamard(t.fft2(t.complexify(t.input(vin))), m)));
  t.backward(t.reduce_sum(t.hadamard(out, t.input(r))), RealMatrix{{1.0}});
  const ComplexMatrix grad = t.cgrad(m);

  const double h = 1e-6;
  double worst = 0.0;
  for (std::size_t i = 0; i < mask0.rows(); ++i) {
    for (std::size_t j = 0; j < mask0.cols(); ++j) {
      ComplexMatrix re_p = mask0, re_m = mask0, im_p = mask0, im_m = mask0;
      re_p(i, j) += h;
      re_m(i, j) -= h;
      im_p(i, j) += std::complex<double>(0.0, h);
      im_m(i, j) -= std::complex<double>(0.0, h);
      const double fd_re = (loss_at(re_p) - loss_at(re_m)) / (2.0 * h);
      const double fd_im = (loss_at(im_p) - loss_at(im_m)) / (2.0 * h);
      worst = std::max(worst, std::fabs(fd_re - grad(i, j).real()));
      worst = std::max(worst, std::fabs(fd_im - grad(i, j).imag()));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("tape backward is re-entrant and upstream shape is enforced") {
  Tape t;
  NodeId w = t.parameter(RealMatrix{{2.0}});
  NodeId out = t.scale(w, 3.0);
  t.backward(out, RealMatrix{{1.0}});
  CHECK(t.grad(w)(0, 0) == 3.0);
  // Second call resets accumulators instead of doubling.
  t.backward(out, RealMatrix{{1.0}});
  CHECK(t.grad(w)(0, 0) == 3.0);
  CHECK_THROWS_AS(t.backward(out, RealMatrix(2, 2)), DimensionError);

  NodeId frozen = t.parameter(RealMatrix{{1.0}}, /*requires_grad=*/false);
  NodeId out2 = t.add(out, frozen);
  t.backward(out2, RealMatrix{{1.0}});
  CHECK(t.grad(w)(0, 0) == 3.0);
}

// --- reference ops --------------------------------------------------------------

TEST_CASE("multi_head_attention matches a per-head manual computation") {
  Rng rng(15);
  const std::size_t n = 4, e = 6, heads = 2, hd = 3;
  RealMatrix q = random_matrix(n, e, rng);
  RealMatrix k = random_matrix(n, e, rng);
  RealMatrix v = random_matrix(n, e, rng);

  RealMatrix expected(n, e);
  for (std::size_t h = 0; h < heads; ++h) {
    // Slice head h columns.
    RealMatrix qh(n, hd), kh(n, hd), vh(n, hd);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < hd; ++j) {
        qh(i, j) = q(i, h * hd + j);
        kh(i, j) = k(i, h * hd + j);
        vh(i, j) = v(i, h * hd + j);
      }
    RealMatrix scores = matmul(qh, transpose(kh));
    scores *= 1.0 / std::sqrt(static_cast<double>(hd));
    // Row softmax.
    for (std::size_t i = 0; i < n; ++i) {
      double mx = scores(i, 0);
      for (std::size_t j = 1; j < n; ++j) mx = std::max(mx, scores(i, j));
      double z = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        scores(i, j) = std::exp(scores(i, j) - mx);
        z += scores(i, j);
      }
      for (std::size_t j = 0; j < n; ++j) scores(i, j) /= z;
    }
    RealMatrix oh = matmul(scores, vh);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < hd; ++j) expected(i, h * hd + j) = oh(i, j);
  }

  RealMatrix out = multi_head_attention(q, k, v, heads);
  CHECK(max_abs_diff(out, expected) < 1e-12);

  CHECK_THROWS_AS(multi_head_attention(q, k, v, 4), DimensionError);
  CHECK_THROWS_AS(multi_head_attention(q, k, RealMatrix(2, 6), 2), DimensionError);
}

TEST_CASE("attention rows are convex combinations of values") {
  Rng rng(16);
  RealMatrix q = random_matrix(5, 4, rng);
  RealMatrix k = random_matrix(5, 4, rng);
  RealMatrix ones(5, 4, 1.0);
  // With V = all-ones, any row-stochastic mixing returns all-ones.
  RealMatrix out = multi_head_attention(q, k, ones, 2);
  CHECK(max_abs_diff(out, ones) < 1e-12);
}

TEST_CASE("mfl identity mask is an exact pass-through") {
  Rng rng(17);
  RealMatrix v = random_matrix(6, 4, rng);
  std::vector<ComplexMatrix> masks(2, ComplexMatrix(6, 2, {1.0, 0.0}));
  RealMatrix out = mfl_apply(v, masks, 2);
  CHECK(max_abs_diff(out, v) < 1e-12);

  // A non-identity mask changes the values.
  masks[0](0, 0) = {0.0, 0.0};
  CHECK(max_abs_diff(mfl_apply(v, masks, 2), v) > 1e-6);

  CHECK_THROWS_AS(mfl_apply(v, masks, 3), DimensionError);
  std::vector<ComplexMatrix> wrong(1, ComplexMatrix(6, 2, {1.0, 0.0}));
  CHECK_THROWS_AS(mfl_apply(v, wrong, 2), ParameterError);
}

TEST_CASE("mfl matches a hand-rolled fourier modulation") {
  Rng rng(18);
  const std::size_t n = 4, hd = 3;
  RealMatrix v = random_matrix(n, hd, rng);
  std::vector<ComplexMatrix> masks = {random_complex(n, hd, rng)};

  ComplexMatrix spectrum = fft2(to_complex(v));
  ComplexMatrix modulated = hadamard(spectrum, masks[0]);
  RealMatrix expected = real_part(ifft2(modulated));

  CHECK(max_abs_diff(mfl_apply(v, masks, 1), expected) < 1e-12);
}

// --- block forward ----------------------------------------------------------------

TEST_CASE("block config validation") {
  BlockConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  CHECK(c.head_dim() == 3);

  BlockConfig bad = c;
  bad.n_tokens = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.heads = 4;  // 4 does not divide 6
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.heads = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("freshly initialized filters reproduce the plain block") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    BlockConfig c = small_config();
    Rng init = rng.stream(trial);
    BlockParams params = init_block_params(c, init);

    // Pass-through init contract.
    CHECK(max_abs(params.w_p.value) == 0.0);
    CHECK(max_abs(params.w_r.value) == 0.0);
    for (const auto& mask : params.w_c)
      for (std::size_t i = 0; i < mask.value.rows(); ++i)
        for (std::size_t j = 0; j < mask.value.cols(); ++j)
          CHECK(mask.value(i, j) == std::complex<double>(1.0, 0.0));

    RealMatrix x = random_matrix(c.n_tokens, c.channels, rng);
    BlockForward filtered = sieformer_block_forward(x, c, params);
    BlockForward plain = baseline_block_forward(x, c, params);
    CHECK(max_abs_diff(filtered.y(), plain.y()) < 1e-10);
    CHECK(filtered.has_filter);
    CHECK_FALSE(plain.has_filter);
  }
}

TEST_CASE("bias ablation shifts the output by exactly w_b w_z") {
  Rng rng(24);
  BlockConfig with_bias = small_config(true);
  BlockConfig no_bias = small_config(false);

  Rng init = rng.stream(1);
  BlockParams params = init_block_params(with_bias, init);
  // Move filters off the identity so both branches carry signal.
  params.w_p.value = random_matrix(6, 6, rng, 0.3);
  params.w_r.value = random_matrix(6, 6, rng, 0.3);
  params.w_b.value = random_matrix(4, 6, rng, 0.5);

  RealMatrix x = random_matrix(4, 5, rng);
  BlockForward ab = sieformer_block_forward(x, with_bias, params);
  BlockForward base = sieformer_block_forward(x, no_bias, params);

  RealMatrix expected_shift = matmul(params.w_b.value, params.w_z.value);
  RealMatrix actual_shift = ab.y() - base.y();
  CHECK(max_abs_diff(actual_shift, expected_shift) < 1e-12);
  CHECK(ab.has_bias);
  CHECK_FALSE(base.has_bias);
}

TEST_CASE("block rejects malformed inputs") {
  Rng rng(25);
  BlockConfig c = small_config();
  Rng init = rng.stream(0);
  BlockParams params = init_block_params(c, init);

  CHECK_THROWS_AS(sieformer_block_forward(RealMatrix(3, 5), c, params), DimensionError);
  RealMatrix bad(4, 5);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sieformer_block_forward(bad, c, params), NumericError);

  BlockParams wrong = params;
  wrong.w_q.value = RealMatrix(2, 2);
  RealMatrix x = random_matrix(4, 5, rng);
  CHECK_THROWS_AS(sieformer_block_forward(x, c, wrong), ParameterError);
}

// --- block backward ------------------------------------------------------------------

TEST_CASE("block backward matches finite differences on every parameter") {
  Rng rng(33);
  BlockConfig c = small_config(true);
  Rng init = rng.stream(0);
  BlockParams params = init_block_params(c, init);
  // Jitter the filter branch off its zero init so its gradients are live.
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) {
      params.w_p.value(i, j) += 0.15 * rng.normal();
      params.w_r.value(i, j) += 0.15 * rng.normal();
    }
  for (auto& mask : params.w_c)
    for (std::size_t i = 0; i < mask.value.rows(); ++i)
      for (std::size_t j = 0; j < mask.value.cols(); ++j)
        mask.value(i, j) += std::complex<double>(0.05 * rng.normal(), 0.05 * rng.normal());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 6; ++j) params.w_b.value(i, j) += 0.2 * rng.normal();

  const RealMatrix x = random_matrix(4, 5, rng);
  const RealMatrix r = random_matrix(4, 5, rng);

  BlockForward fwd = sieformer_block_forward(x, c, params);
  params.zero_grads();
  block_backward(fwd, r, params);

  auto loss_with = [&](const BlockParams& p) {
    BlockForward f = sieformer_block_forward(x, c, p);
    return probe(f.y(), r);
  };

  const double h = 1e-6;
  auto fd_check = [&](RealMatrix& slot, const RealMatrix& grad) {
    double worst = 0.0;
    for (std::size_t i = 0; i < slot.rows(); ++i)
      for (std::size_t j = 0; j < slot.cols(); ++j) {
        const double keep = slot(i, j);
        slot(i, j) = keep + h;
        const double up = loss_with(params);
        slot(i, j) = keep - h;
        const double down = loss_with(params);
        slot(i, j) = keep;
        const double fd = (up - down) / (2.0 * h);
        const double denom = std::max({std::fabs(fd), std::fabs(grad(i, j)), 1e-8});
        worst = std::max(worst, std::fabs(fd - grad(i, j)) / denom);
      }
    return worst;
  };

  CHECK(fd_check(params.w_q.value, params.w_q.grad) < 1e-5);
  CHECK(fd_check(params.w_k.value, params.w_k.grad) < 1e-5);
  CHECK(fd_check(params.w_v.value, params.w_v.grad) < 1e-5);
  CHECK(fd_check(params.w_z.value, params.w_z.grad) < 1e-5);
  CHECK(fd_check(params.w_p.value, params.w_p.grad) < 1e-5);
  CHECK(fd_check(params.w_r.value, params.w_r.grad) < 1e-5);
  CHECK(fd_check(params.w_b.value, params.w_b.grad) < 1e-5);

  // Complex masks, componentwise.
  for (auto& mask : params.w_c) {
    double worst = 0.0;
    for (std::size_t i = 0; i < mask.value.rows(); ++i)
      for (std::size_t j = 0; j < mask.value.cols(); ++j) {
        const std::complex<double> keep = mask.value(i, j);
        mask.value(i, j) = keep + std::complex<double>(h, 0.0);
        const double re_up = loss_with(params);
        mask.value(i, j) = keep - std::complex<double>(h, 0.0);
        const double re_down = loss_with(params);
        mask.value(i, j) = keep + std::complex<double>(0.0, h);
        const double im_up = loss_with(params);
        mask.value(i, j) = keep - std::complex<double>(0.0, h);
        const double im_down = loss_with(params);
        mask.value(i, j) = keep;
        worst = std::max(worst,
                         std::fabs((re_up - re_down) / (2.0 * h) - mask.grad(i, j).real()));
        worst = std::max(worst,
                         std::fabs((im_up - im_down) / (2.0 * h) - mask.grad(i, j).imag()));
      }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("freeze_wz keeps the projection gradient untouched") {
  Rng rng(34);
  BlockConfig c = small_config();
  c.freeze_wz = true;
  Rng init = rng.stream(0);
  BlockParams params = init_block_params(c, init);
  RealMatrix x = random_matrix(4, 5, rng);

  BlockForward fwd = sieformer_block_forward(x, c, params);
  params.zero_grads();
  block_backward(fwd, random_matrix(4, 5, rng), params);

  CHECK(max_abs(params.w_z.grad) == 0.0);   // frozen
  CHECK(max_abs(params.w_q.grad) > 0.0);    // everything else flows
  CHECK(max_abs(params.w_v.grad) > 0.0);
}

TEST_CASE("block backward rejects an empty forward") {
  BlockForward fwd;
  BlockParams params;
  CHECK_THROWS_AS(block_backward(fwd, RealMatrix(1, 1), params), StateError);
}

// --- parameter packing -----------------------------------------------------------------

TEST_CASE("block params round-trip through the tensor container") {
  Rng rng(44);
  BlockConfig c = small_config(true);
  Rng init = rng.stream(9);
  BlockParams params = init_block_params(c, init);
  params.w_p.value = random_matrix(6, 6, rng);
  params.w_c[1].value(2, 1) = {0.25, -1.5};

  auto tensors = pack_block_params(c, params);
  const auto path = std::filesystem::temp_directory_path() / "sief_block_params.ckpt";
  save_tensors(path.string(), tensors);
  auto loaded = load_tensors(path.string());
  std::filesystem::remove(path);

  BlockParams restored;
  unpack_block_params(loaded, c, restored);

  CHECK(restored.w_q.value == params.w_q.value);
  CHECK(restored.w_k.value == params.w_k.value);
  CHECK(restored.w_v.value == params.w_v.value);
  CHECK(restored.w_z.value == params.w_z.value);
  CHECK(restored.w_p.value == params.w_p.value);
  CHECK(restored.w_r.value == params.w_r.value);
  CHECK(restored.w_b.value == params.w_b.value);
  REQUIRE(restored.w_c.size() == params.w_c.size());
  for (std::size_t h = 0; h < params.w_c.size(); ++h)
    CHECK(restored.w_c[h].value == params.w_c[h].value);

  // Outputs agree bitwise through the round-trip.
  RealMatrix x = random_matrix(4, 5, rng);
  CHECK(max_abs_diff(sieformer_block_forward(x, c, params).y(),
                     sieformer_block_forward(x, c, restored).y()) == 0.0);

  // Missing tensor is rejected.
  tensors.pop_back();
  BlockParams broken;
  CHECK_THROWS_AS(unpack_block_params(tensors, c, broken), IoError);
}

// --- experiment harness around the block ------------------------------------------------

TEST_CASE("run_grad_check passes on the default config and names all parameters") {
  GradCheckConfig config;
  GradCheckReport report = run_grad_check(config);
  CHECK(report.pass);
  CHECK(report.rel_tol == 1e-4);
  REQUIRE(report.entries.size() == 8);  // q, k, v, z, p, r, b, c
  for (const auto& e : report.entries) {
    CAPTURE(e.param);
    CHECK(e.pass);
    CHECK(e.checked > 0);
    CHECK(e.max_rel_error < 1e-4);
  }
}

TEST_CASE("run_grad_check catches a corrupted gradient") {
  GradCheckConfig config;
  config.corrupt = "w_r";
  GradCheckReport report = run_grad_check(config);
  CHECK_FALSE(report.pass);
  bool found = false;
  for (const auto& e : report.entries)
    if (e.param == "w_r") {
      found = true;
      CHECK_FALSE(e.pass);
      CHECK(e.max_rel_error > 1e-4);
    }
  CHECK(found);

  config.corrupt = "w_nonexistent";
  CHECK_THROWS_AS(run_grad_check(config), ConfigError);
}

TEST_CASE("run_equivalence verifies spectra, duality, and initialization") {
  EquivalenceConfig config;
  config.trials = 25;       // trimmed for unit-test latency
  config.init_trials = 10;
  EquivalenceReport report = run_equivalence(config);
  CHECK(report.pass);
  CHECK(report.bounds_pass);
  CHECK(report.baf_pass);
  CHECK(report.init_pass);
  CHECK(report.eigenvalue_min >= -1e-9);
  CHECK(report.eigenvalue_max <= 2.0 + 1e-9);
  CHECK(report.baf_max_deviation < 1e-8);
  CHECK(report.init_max_deviation < 1e-10);
  // Two-token path: extremal eigenvalues up to the degree regularizer.
  CHECK(report.path2_eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(report.path2_eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-6));
}
