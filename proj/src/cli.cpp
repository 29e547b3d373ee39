#include "seedseg/cli.hpp"

#include <charconv>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string_view>

#include <CLI11.hpp>

#include "seedseg/error.hpp"
#include "seedseg/formats.hpp"
#include "seedseg/perceptron.hpp"
#include "seedseg/pipeline.hpp"
#include "seedseg/segmenter.hpp"
#include "seedseg/service.hpp"
#include "seedseg/trainset.hpp"

namespace seedseg {

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<PixelCoord> parse_point(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  auto to_int = [](std::string_view s) -> std::optional<int> {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
  };
  const auto x = to_int(text.substr(0, comma));
  const auto y = to_int(text.substr(comma + 1));
  if (!x || !y) return std::nullopt;
  return PixelCoord{*x, *y};
}

void warn_noise(const NoiseConfig& cfg, std::ostream& err) {
  if (cfg.p > kRecommendedMaxNoise) {
    err << "warning: noise above " << kRecommendedMaxNoise
        << "% tends to corrupt the training set; proceeding\n";
  }
}

struct Options {
  std::string input;
  std::string output;
  std::string model;
  std::string labels;
  std::string contours;
  std::string overlay;
  std::string dump_samples;
  std::string damaged;
  std::string at;
  std::string host = "127.0.0.1";
  std::string static_dir;
  double noise_p = 10.0;
  int noise_runs = 100;
  int hidden = 50;
  int epochs = 30;
  double lr = 0.1;
  std::uint64_t seed = 0;
  int run = 0;
  int port = 8080;
};

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const Image img = load_ppm(read_file(o.input));
  PipelineConfig cfg = PipelineConfig::with_seed(o.seed);
  cfg.noise.p = o.noise_p;
  cfg.noise.runs = o.noise_runs;
  cfg.hidden_size = o.hidden;
  cfg.train.epochs = o.epochs;
  cfg.train.learning_rate = o.lr;
  warn_noise(cfg.noise, err);
  if (!o.dump_samples.empty()) {
    write_file(o.dump_samples, samples_to_tsv(build_training_set(img, cfg.noise)));
  }
  const TrainedModel trained = train_on_image(img, cfg);
  write_file(o.output, serialize_model(trained.mlp));
  out << "pairs " << trained.pairs << "\nepochs " << trained.report.epochs_run
      << "\nfinal_mean_loss " << trained.report.final_mean_loss << "\nseconds "
      << trained.seconds << "\n";
  return kOk;
}

int cmd_auto(const Options& o, std::ostream& out) {
  const Image img = load_ppm(read_file(o.input));
  const Mlp mlp = parse_model(read_file(o.model));
  const AutoSegmentation seg = segment_auto(img, mlp_decider(mlp), o.seed);
  write_file(o.output, save_smap(seg.labels));
  if (!o.contours.empty()) write_file(o.contours, save_ppm(render_contours(img, seg.labels)));
  out << "segments " << seg.labels.max_label() << "\nevaluations " << seg.stats.evaluations
      << "\n";
  return kOk;
}

int cmd_grow(const Options& o, std::ostream& out) {
  const auto at = parse_point(o.at);
  if (!at) throw UsageError("--at expects x,y (0-based), got '" + o.at + "'");
  const Image img = load_ppm(read_file(o.input));
  const Mlp mlp = parse_model(read_file(o.model));
  const PointSegmentation seg = segment_from_point(img, mlp_decider(mlp), *at);
  write_file(o.output, save_pbm(img.width(), img.height(), seg.mask));
  if (!o.overlay.empty()) {
    write_file(o.overlay, save_ppm(overlay_mask(img, seg.mask, {255, 0, 0}, 0.5)));
  }
  out << "size " << seg.mask.size() << "\n";
  return kOk;
}

int cmd_corrupt(const Options& o, std::ostream& out, std::ostream& err) {
  const Image img = load_ppm(read_file(o.input));
  NoiseConfig cfg;
  cfg.p = o.noise_p;
  cfg.runs = 1;
  cfg.rng_seed = o.seed;
  warn_noise(cfg, err);
  const CorruptionResult cr = corrupt_impulse(img, cfg, o.run);
  write_file(o.output, save_ppm(cr.corrupted));
  if (!o.damaged.empty()) {
    std::string list;
    for (const PixelCoord& p : cr.damaged) list += std::to_string(p.x) + "," + std::to_string(p.y) + "\n";
    write_file(o.damaged, list);
  }
  out << "damaged " << cr.damaged.size() << "\n";
  return kOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  const LabelMap labels = load_smap(read_file(o.labels));
  if (!o.input.empty()) {
    const Image img = load_ppm(read_file(o.input));
    if (img.width() != labels.width() || img.height() != labels.height()) {
      throw Error(ErrorCode::DimensionMismatch, "label map is " + std::to_string(labels.width()) +
                                                    "x" + std::to_string(labels.height()) +
                                                    " but the image is " +
                                                    std::to_string(img.width()) + "x" +
                                                    std::to_string(img.height()));
    }
  }
  const auto sizes = segment_stats(labels);
  std::map<std::size_t, std::size_t> histogram;
  std::size_t segments = 0;
  for (const auto& [label, count] : sizes) {
    if (label == 0) continue;
    ++segments;
    ++histogram[count];
  }
  out << "segments " << segments << "\n";
  if (const auto zero = sizes.find(0); zero != sizes.end()) out << "unlabeled " << zero->second << "\n";
  out << "size\tcount\n";
  for (const auto& [size, count] : histogram) out << size << "\t" << count << "\n";
  return kOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  ServiceOptions so;
  so.host = o.host;
  so.port = o.port;
  so.static_dir = o.static_dir;
  Service service(so);
  if (!o.input.empty()) {
    out << "session " << service.create_session(load_ppm(read_file(o.input))) << "\n";
  }
  const int port = service.bind();
  out << "listening on http://" << so.host << ":" << port << "\n" << std::flush;
  service.serve();
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-image neural segmentation by region growing"};
  app.name(args.empty() ? "seedseg" : args[0]);
  app.require_subcommand(1);
  Options o;

  auto noise_flags = [&o](CLI::App* cmd) {
    cmd->add_option("--noise-p", o.noise_p, "Percent of pixels damaged per run")->capture_default_str();
    cmd->add_option("--seed", o.seed, "RNG seed for this stage")->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "Build the impulse-noise training set and train a model");
  train->add_option("-i,--input", o.input, "Input image (binary PPM)")->required();
  train->add_option("-o,--output", o.output, "Model file to write (.msf)")->required();
  noise_flags(train);
  train->add_option("--noise-runs", o.noise_runs, "Corruption runs")->capture_default_str();
  train->add_option("--hidden", o.hidden, "Hidden layer size")->capture_default_str();
  train->add_option("--epochs", o.epochs, "Training epochs")->capture_default_str();
  train->add_option("--lr", o.lr, "Learning rate")->capture_default_str();
  train->add_option("--dump-samples", o.dump_samples, "Also write the training samples (.tsv)");

  auto* autoseg = app.add_subcommand("auto", "Segment the whole image");
  autoseg->add_option("-i,--input", o.input, "Input image (binary PPM)")->required();
  autoseg->add_option("-m,--model", o.model, "Model file (.msf)")->required();
  autoseg->add_option("-o,--output", o.output, "Label map to write (.smap)")->required();
  autoseg->add_option("--contours", o.contours, "Also write a contour rendering (PPM)");
  autoseg->add_option("--seed", o.seed, "RNG seed for seed-pixel selection")->capture_default_str();

  auto* grow = app.add_subcommand("grow", "Grow the single segment containing a point");
  grow->add_option("-i,--input", o.input, "Input image (binary PPM)")->required();
  grow->add_option("-m,--model", o.model, "Model file (.msf)")->required();
  grow->add_option("--at", o.at, "Seed point x,y (0-based)")->required();
  grow->add_option("-o,--output", o.output, "Mask to write (PBM P1)")->required();
  grow->add_option("--overlay", o.overlay, "Also write the image with the mask blended in (PPM)");

  auto* corrupt = app.add_subcommand("corrupt", "Write an impulse-noise corrupted copy");
  corrupt->add_option("-i,--input", o.input, "Input image (binary PPM)")->required();
  corrupt->add_option("-o,--output", o.output, "Corrupted image to write (PPM)")->required();
  noise_flags(corrupt);
  corrupt->add_option("--run", o.run, "Run index salting the generator")->capture_default_str();
  corrupt->add_option("--damaged", o.damaged, "Also write the damaged coordinates, one x,y per line");

  auto* stats = app.add_subcommand("stats", "Print the segment-size histogram of a label map");
  stats->add_option("-l,--labels", o.labels, "Label map (.smap)")->required();
  stats->add_option("-i,--input", o.input, "Image to check the label map dimensions against");

  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("-i,--input", o.input, "Image to open as an initial session");
  serve->add_option("--host", o.host, "Listen address")->capture_default_str();
  serve->add_option("--port", o.port, "Listen port (0 picks a free one)")->capture_default_str();
  serve->add_option("--static-dir", o.static_dir, "Directory served at / (browser client)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("seedseg");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train) return cmd_train(o, out, err);
    if (*autoseg) return cmd_auto(o, out);
    if (*grow) return cmd_grow(o, out);
    if (*corrupt) return cmd_corrupt(o, out, err);
    if (*stats) return cmd_stats(o, out);
    if (*serve) return cmd_serve(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace seedseg
