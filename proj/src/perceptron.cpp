#include "seedseg/perceptron.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "mlp_kernel.hpp"
#include "seedseg/error.hpp"

namespace seedseg {

namespace {

double loss_of(Outputs o, Decision target) {
  const double tj = target == Decision::Join ? 1.0 : 0.0;
  const double ej = o.join - tj;
  const double er = o.reject - (1.0 - tj);
  return 0.5 * (ej * ej + er * er);
}

PairInput input_of(const Sample& s, double) { return s.input; }
PairInput input_of(const PairSample& s, double norm) { return s.input(norm); }

template <typename SampleT>
std::pair<Mlp, TrainReport> train_impl(Mlp mlp, std::span<const SampleT> samples,
                                       const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (!(cfg.learning_rate > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "learning rate must be positive");
  }
  TrainReport report;
  report.samples = samples.size();
  if (samples.empty()) return {std::move(mlp), report};

  std::mt19937_64 rng(cfg.shuffle_seed);
  std::vector<std::uint32_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0u);
  const double lr = cfg.learning_rate;
  const double norm = mlp.norm();
  constexpr std::size_t kPrefetch = 16;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i + kPrefetch < order.size()) __builtin_prefetch(&samples[order[i + kPrefetch]]);
      const SampleT& s = samples[order[i]];
      loss_sum += kernel::sgd_step(mlp, input_of(s, norm), s.target, lr);
    }
    report.epochs_run = epoch + 1;
    report.final_mean_loss = loss_sum / static_cast<double>(samples.size());
  }
  return {std::move(mlp), report};
}

void append_double(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

Mlp::Mlp(int hidden_size, double norm) : hidden_(hidden_size), norm_(norm) {
  if (hidden_size < 1) throw Error(ErrorCode::InvalidArgument, "hidden size must be >= 1");
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::InvalidArgument, "norm must be positive and finite");
  }
  params_.assign(static_cast<std::size_t>(9 * hidden_size + 2), 0.0);
}

Mlp init_mlp(int hidden_size, std::uint64_t rng_seed) {
  Mlp mlp(hidden_size);
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  for (double& p : mlp.params()) p = dist(rng);
  return mlp;
}

Outputs forward(const Mlp& mlp, const PairInput& input) { return kernel::forward(mlp, input); }

Decision decide(const Mlp& mlp, const PairInput& input) {
  const Outputs o = kernel::forward(mlp, input);
  return o.join > o.reject ? Decision::Join : Decision::Reject;
}

double sample_loss(const Mlp& mlp, const PairInput& input, Decision target) {
  return loss_of(kernel::forward(mlp, input), target);
}

double backprop(const Mlp& mlp, const PairInput& input, Decision target,
                std::span<double> grad) {
  if (grad.size() != mlp.parameter_count()) {
    throw Error(ErrorCode::DimensionMismatch, "gradient buffer has the wrong size");
  }
  return kernel::backprop(mlp, input, target, grad);
}

std::pair<Mlp, TrainReport> train(Mlp mlp, std::span<const Sample> samples,
                                  const TrainConfig& cfg) {
  return train_impl(std::move(mlp), samples, cfg);
}

std::pair<Mlp, TrainReport> train(Mlp mlp, std::span<const PairSample> samples,
                                  const TrainConfig& cfg) {
  return train_impl(std::move(mlp), samples, cfg);
}

std::string serialize_model(const Mlp& mlp) {
  const int H = mlp.hidden_size();
  std::string out = "SEEDSEG-MLP 1\ndims 6 " + std::to_string(H) + " 2 norm ";
  append_double(out, mlp.norm());
  out += '\n';
  auto line = [&out](auto&& values) {
    bool first = true;
    for (double v : values) {
      if (!first) out += ' ';
      first = false;
      append_double(out, v);
    }
    out += '\n';
  };
  std::vector<double> row;
  for (int h = 0; h < H; ++h) {
    row.clear();
    for (int c = 0; c < Mlp::kInputs; ++c) row.push_back(mlp.w1(h, c));
    line(row);
  }
  row.clear();
  for (int h = 0; h < H; ++h) row.push_back(mlp.b1(h));
  line(row);
  for (int k = 0; k < Mlp::kOutputs; ++k) {
    row.clear();
    for (int h = 0; h < H; ++h) row.push_back(mlp.w2(k, h));
    line(row);
  }
  line(std::array<double, 2>{mlp.b2(0), mlp.b2(1)});
  return out;
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(start, end - start);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    lines.push_back(l);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string_view::npos) {
    lines.pop_back();
  }
  return lines;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

double to_double(std::string_view token) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::NonNumeric, "non-numeric token '" + std::string(token) + "'");
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonNumeric, "non-finite value '" + std::string(token) + "'");
  }
  return v;
}

long long to_int(std::string_view token) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::NonNumeric, "non-numeric token '" + std::string(token) + "'");
  }
  return v;
}

std::vector<double> numbers(std::string_view line, std::size_t expected, const char* what) {
  const auto words = split_words(line);
  if (words.size() != expected) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " line has " +
                                                  std::to_string(words.size()) +
                                                  " values, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (auto w : words) out.push_back(to_double(w));
  return out;
}

}  // namespace

Mlp parse_model(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::BadMagic, "empty model file");
  const auto magic = split_words(lines[0]);
  if (magic.empty() || magic[0] != "SEEDSEG-MLP") {
    throw Error(ErrorCode::BadMagic, "not a model file");
  }
  if (magic.size() != 2 || magic[1] != "1") {
    throw Error(ErrorCode::BadVersion, "unsupported model version '" + std::string(lines[0]) + "'");
  }
  if (lines.size() < 2) throw Error(ErrorCode::Truncated, "missing dims line");
  const auto dims = split_words(lines[1]);
  if (dims.size() != 6 || dims[0] != "dims" || dims[4] != "norm") {
    throw Error(ErrorCode::DimensionMismatch, "malformed dims line '" + std::string(lines[1]) + "'");
  }
  const long long inputs = to_int(dims[1]);
  const long long hidden = to_int(dims[2]);
  const long long outputs = to_int(dims[3]);
  const double norm = to_double(dims[5]);
  if (inputs != Mlp::kInputs || outputs != Mlp::kOutputs || hidden < 1 || hidden > (1 << 24)) {
    throw Error(ErrorCode::DimensionMismatch, "unsupported dims '" + std::string(lines[1]) + "'");
  }
  const int H = static_cast<int>(hidden);
  const std::size_t expected_lines = 2 + static_cast<std::size_t>(H) + 1 + 2 + 1;
  if (lines.size() != expected_lines) {
    throw Error(ErrorCode::DimensionMismatch, "model has " + std::to_string(lines.size()) +
                                                  " lines, expected " +
                                                  std::to_string(expected_lines));
  }

  Mlp mlp(H, norm);
  std::size_t li = 2;
  for (int h = 0; h < H; ++h) {
    const auto row = numbers(lines[li++], Mlp::kInputs, "w1");
    for (int c = 0; c < Mlp::kInputs; ++c) mlp.w1(h, c) = row[c];
  }
  const auto b1 = numbers(lines[li++], static_cast<std::size_t>(H), "b1");
  for (int h = 0; h < H; ++h) mlp.b1(h) = b1[h];
  for (int k = 0; k < Mlp::kOutputs; ++k) {
    const auto row = numbers(lines[li++], static_cast<std::size_t>(H), "w2");
    for (int h = 0; h < H; ++h) mlp.w2(k, h) = row[h];
  }
  const auto b2 = numbers(lines[li++], Mlp::kOutputs, "b2");
  mlp.b2(0) = b2[0];
  mlp.b2(1) = b2[1];
  return mlp;
}

}  // namespace seedseg
