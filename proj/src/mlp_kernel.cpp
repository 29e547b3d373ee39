#include "mlp_kernel.hpp"

#include <cmath>
#include <vector>

namespace seedseg::kernel {

namespace {

// Hidden size with a dedicated, fully unrolled instantiation.
constexpr int kCommonHidden = 50;

// Sigmoid loops run over whole vector widths; the extra lanes are zero-filled scratch.
constexpr int kLanes = 8;
constexpr int padded(int n) { return (n + kLanes - 1) / kLanes * kLanes; }

inline void sigmoid_inplace(double* __restrict x, int n) {
  for (int i = 0; i < n; ++i) x[i] = 1.0 / (1.0 + std::exp(-x[i]));
}

double* dynamic_scratch(std::size_t n) {
  thread_local std::vector<double> buf;
  if (buf.size() < n) buf.resize(n);
  return buf.data();
}

template <int FixedH>
struct Layout {
  int H;
  const double* w1;  // input-major
  const double* b1;
  const double* wj;
  const double* wr;
  const double* b2;

  explicit Layout(const Mlp& mlp)
      : H(FixedH ? FixedH : mlp.hidden_size()),
        w1(mlp.params().data()),
        b1(w1 + mlp.b1_index(0)),
        wj(w1 + mlp.w2_index(Mlp::kJoin, 0)),
        wr(w1 + mlp.w2_index(Mlp::kReject, 0)),
        b2(w1 + mlp.b2_index(0)) {}
};

template <int FixedH>
Outputs run_forward(const Layout<FixedH>& L, const PairInput& in, double* __restrict hidden) {
  const int H = FixedH ? FixedH : L.H;
  const int Hp = FixedH ? padded(FixedH) : padded(L.H);
  const double* __restrict w = L.w1;
  const std::size_t s = static_cast<std::size_t>(H);
  // Unit-outer so each pre-activation stays in a register.
  for (int h = 0; h < H; ++h) {
    hidden[h] = L.b1[h] + (in[0] * w[h] + in[1] * w[s + h]) +
                (in[2] * w[2 * s + h] + in[3] * w[3 * s + h]) +
                (in[4] * w[4 * s + h] + in[5] * w[5 * s + h]);
  }
  for (int h = H; h < Hp; ++h) hidden[h] = 0.0;
  sigmoid_inplace(hidden, Hp);
  double j = 0.0;
  double r = 0.0;
  for (int h = 0; h < H; ++h) {
    j += L.wj[h] * hidden[h];
    r += L.wr[h] * hidden[h];
  }
  alignas(64) double out[kLanes] = {j + L.b2[0], r + L.b2[1]};
  sigmoid_inplace(out, kLanes);
  return {out[0], out[1]};
}

struct OutputDelta {
  double join;
  double reject;
  double loss;
};

// dL/dz at the output pre-activations for L = 0.5 * sum (o - t)^2.
OutputDelta output_delta(Outputs o, Decision target) {
  const double tj = target == Decision::Join ? 1.0 : 0.0;
  const double tr = 1.0 - tj;
  const double ej = o.join - tj;
  const double er = o.reject - tr;
  return {ej * o.join * (1.0 - o.join), er * o.reject * (1.0 - o.reject),
          0.5 * (ej * ej + er * er)};
}

template <int FixedH>
double run_backprop(const Mlp& mlp, const PairInput& in, Decision target, double* __restrict g,
                    double* __restrict hidden, double* __restrict delta) {
  const Layout<FixedH> L(mlp);
  const int H = FixedH ? FixedH : L.H;
  const OutputDelta d = output_delta(run_forward(L, in, hidden), target);
  double* gw1 = g;
  double* gb1 = g + mlp.b1_index(0);
  double* gwj = g + mlp.w2_index(Mlp::kJoin, 0);
  double* gwr = g + mlp.w2_index(Mlp::kReject, 0);
  double* gb2 = g + mlp.b2_index(0);
  for (int h = 0; h < H; ++h) {
    const double a = hidden[h];
    gwj[h] = d.join * a;
    gwr[h] = d.reject * a;
    delta[h] = (d.join * L.wj[h] + d.reject * L.wr[h]) * a * (1.0 - a);
    gb1[h] = delta[h];
  }
  gb2[0] = d.join;
  gb2[1] = d.reject;
  for (int c = 0; c < Mlp::kInputs; ++c) {
    const double v = in[c];
    double* col = gw1 + static_cast<std::size_t>(c) * H;
    for (int h = 0; h < H; ++h) col[h] = delta[h] * v;
  }
  return d.loss;
}

// Same arithmetic as run_backprop followed by p -= lr * g, without the gradient buffer.
template <int FixedH>
double run_sgd_step(Mlp& mlp, const PairInput& in, Decision target, double lr,
                    double* __restrict hidden) {
  const Layout<FixedH> L(mlp);
  const int H = FixedH ? FixedH : L.H;
  const std::size_t s = static_cast<std::size_t>(H);
  const OutputDelta d = output_delta(run_forward(L, in, hidden), target);
  double* __restrict w1 = mlp.params().data();
  double* __restrict b1 = w1 + mlp.b1_index(0);
  double* __restrict wj = w1 + mlp.w2_index(Mlp::kJoin, 0);
  double* __restrict wr = w1 + mlp.w2_index(Mlp::kReject, 0);
  double* __restrict b2 = w1 + mlp.b2_index(0);
  for (int h = 0; h < H; ++h) {
    const double a = hidden[h];
    const double delta = (d.join * wj[h] + d.reject * wr[h]) * a * (1.0 - a);
    wj[h] -= lr * (d.join * a);
    wr[h] -= lr * (d.reject * a);
    b1[h] -= lr * delta;
    w1[h] -= lr * (delta * in[0]);
    w1[s + h] -= lr * (delta * in[1]);
    w1[2 * s + h] -= lr * (delta * in[2]);
    w1[3 * s + h] -= lr * (delta * in[3]);
    w1[4 * s + h] -= lr * (delta * in[4]);
    w1[5 * s + h] -= lr * (delta * in[5]);
  }
  b2[0] -= lr * d.join;
  b2[1] -= lr * d.reject;
  return d.loss;
}

}  // namespace

Outputs forward(const Mlp& mlp, const PairInput& input) {
  if (mlp.hidden_size() == kCommonHidden) {
    alignas(64) double hidden[padded(kCommonHidden)];
    return run_forward(Layout<kCommonHidden>(mlp), input, hidden);
  }
  double* hidden = dynamic_scratch(static_cast<std::size_t>(padded(mlp.hidden_size())));
  return run_forward(Layout<0>(mlp), input, hidden);
}

double backprop(const Mlp& mlp, const PairInput& input, Decision target,
                std::span<double> grad) {
  if (mlp.hidden_size() == kCommonHidden) {
    alignas(64) double hidden[padded(kCommonHidden)];
    alignas(64) double delta[kCommonHidden];
    return run_backprop<kCommonHidden>(mlp, input, target, grad.data(), hidden, delta);
  }
  double* buf = dynamic_scratch(2 * static_cast<std::size_t>(padded(mlp.hidden_size())));
  return run_backprop<0>(mlp, input, target, grad.data(), buf, buf + padded(mlp.hidden_size()));
}

double sgd_step(Mlp& mlp, const PairInput& input, Decision target, double learning_rate) {
  if (mlp.hidden_size() == kCommonHidden) {
    alignas(64) double hidden[padded(kCommonHidden)];
    return run_sgd_step<kCommonHidden>(mlp, input, target, learning_rate, hidden);
  }
  double* hidden = dynamic_scratch(static_cast<std::size_t>(padded(mlp.hidden_size())));
  return run_sgd_step<0>(mlp, input, target, learning_rate, hidden);
}

}  // namespace seedseg::kernel
