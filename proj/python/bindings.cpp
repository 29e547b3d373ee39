#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "seedseg/error.hpp"
#include "seedseg/formats.hpp"
#include "seedseg/image.hpp"
#include "seedseg/perceptron.hpp"
#include "seedseg/pipeline.hpp"
#include "seedseg/segmenter.hpp"
#include "seedseg/trainset.hpp"

namespace py = pybind11;
using namespace seedseg;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Images cross the boundary as (H, W, 3) uint8 arrays.
Image to_image(const U8Array& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw py::value_error("image must have shape (H, W, 3)");
  const int h = static_cast<int>(a.shape(0));
  const int w = static_cast<int>(a.shape(1));
  std::vector<Rgb> px(static_cast<std::size_t>(w) * h);
  static_assert(sizeof(Rgb) == 3);
  std::memcpy(px.data(), a.data(), px.size() * 3);
  return Image(w, h, std::move(px));
}

U8Array from_image(const Image& img) {
  U8Array out({img.height(), img.width(), 3});
  std::memcpy(out.mutable_data(), img.pixels().data(), img.size() * 3);
  return out;
}

py::array_t<std::uint32_t> from_labels(const LabelMap& lm) {
  py::array_t<std::uint32_t> out({lm.height(), lm.width()});
  std::memcpy(out.mutable_data(), lm.labels().data(), lm.size() * sizeof(Label));
  return out;
}

LabelMap to_labels(const py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("labels must have shape (H, W)");
  LabelMap lm(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  const std::uint32_t* p = a.data();
  for (std::size_t i = 0; i < lm.size(); ++i) lm.set(i, p[i]);
  return lm;
}

PairInput to_input(const F64Array& a) {
  if (a.size() != 6) throw py::value_error("input must have 6 values");
  PairInput in;
  std::memcpy(in.data(), a.data(), sizeof(in));
  return in;
}

py::dict report_dict(const TrainReport& r) {
  py::dict d;
  d["epochs_run"] = r.epochs_run;
  d["final_mean_loss"] = r.final_mean_loss;
  d["samples"] = r.samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "seedseg core bindings";

  static py::exception<Error> error(m, "SeedsegError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // Attach the machine-readable code, e.g. "bad-magic".
      py::object inst = py::handle(error)(e.what());
      inst.attr("code") = to_string(e.code());
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  m.def("load_ppm", [](py::bytes data) { return from_image(load_ppm(std::string(data))); },
        py::arg("data"), "Decode binary PPM (P6, maxval 255) bytes into an (H, W, 3) uint8 array.");
  m.def("save_ppm", [](const U8Array& img) { return py::bytes(save_ppm(to_image(img))); },
        py::arg("image"));

  py::class_<Mlp>(m, "Mlp")
      .def(py::init<int, double>(), py::arg("hidden_size") = 50, py::arg("norm") = kDefaultNorm)
      .def_property_readonly("hidden_size", &Mlp::hidden_size)
      .def_property_readonly("norm", &Mlp::norm)
      .def_property(
          "params",
          [](const Mlp& mlp) {
            auto p = mlp.params();
            return py::array_t<double>(static_cast<py::ssize_t>(p.size()), p.data());
          },
          [](Mlp& mlp, const F64Array& a) {
            if (static_cast<std::size_t>(a.size()) != mlp.parameter_count())
              throw py::value_error("parameter count mismatch");
            std::memcpy(mlp.params().data(), a.data(), mlp.parameter_count() * sizeof(double));
          },
          "Flat parameters: w1 (6 x H, input-major), b1, w2 (2 x H), b2.")
      .def(
          "forward",
          [](const Mlp& mlp, const F64Array& in) {
            const Outputs o = forward(mlp, to_input(in));
            return py::make_tuple(o.join, o.reject);
          },
          py::arg("input"), "Returns (join, reject) activations for six normalized inputs.")
      .def(
          "decide", [](const Mlp& mlp, const F64Array& in) { return decide(mlp, to_input(in)) == Decision::Join; },
          py::arg("input"), "True for Join.")
      .def(py::self == py::self);

  m.def("init_mlp", &init_mlp, py::arg("hidden_size"), py::arg("seed"));
  m.def("serialize_model", &serialize_model, py::arg("mlp"));
  m.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));

  m.def(
      "build_training_set",
      [](const U8Array& img, double p, int runs, std::uint64_t seed, double norm) {
        const auto samples = build_training_set(to_image(img), {p, runs, seed});
        py::array_t<double> inputs({static_cast<py::ssize_t>(samples.size()), py::ssize_t{6}});
        py::array_t<bool> joins(static_cast<py::ssize_t>(samples.size()));
        double* x = inputs.mutable_data();
        bool* t = joins.mutable_data();
        for (std::size_t i = 0; i < samples.size(); ++i) {
          const PairInput in = samples[i].input(norm);
          std::memcpy(x + 6 * i, in.data(), sizeof(in));
          t[i] = samples[i].target == Decision::Join;
        }
        return py::make_tuple(inputs, joins);
      },
      py::arg("image"), py::arg("p") = 10.0, py::arg("runs") = 100, py::arg("seed") = 0,
      py::arg("norm") = kDefaultNorm,
      "Returns (inputs[N, 6], is_join[N]) in shuffled order.");

  m.def(
      "train",
      [](Mlp mlp, const F64Array& inputs, const py::array_t<bool, py::array::c_style | py::array::forcecast>& joins,
         int epochs, double lr, std::uint64_t seed) {
        if (inputs.ndim() != 2 || inputs.shape(1) != 6 || joins.size() != inputs.shape(0))
          throw py::value_error("inputs must be (N, 6) with N targets");
        std::vector<Sample> samples(static_cast<std::size_t>(inputs.shape(0)));
        for (std::size_t i = 0; i < samples.size(); ++i) {
          std::memcpy(samples[i].input.data(), inputs.data() + 6 * i, 6 * sizeof(double));
          samples[i].target = joins.data()[i] ? Decision::Join : Decision::Reject;
        }
        std::pair<Mlp, TrainReport> r;
        {
          py::gil_scoped_release release;
          r = train(std::move(mlp), samples, {epochs, lr, seed});
        }
        return py::make_tuple(r.first, report_dict(r.second));
      },
      py::arg("mlp"), py::arg("inputs"), py::arg("is_join"), py::arg("epochs") = 30,
      py::arg("learning_rate") = 0.1, py::arg("seed") = 0, "Returns (trained Mlp, report dict).");

  m.def(
      "train_on_image",
      [](const U8Array& img, std::uint64_t seed, double p, int runs, int hidden, int epochs,
         double lr) {
        PipelineConfig cfg = PipelineConfig::with_seed(seed);
        cfg.noise.p = p;
        cfg.noise.runs = runs;
        cfg.hidden_size = hidden;
        cfg.train.epochs = epochs;
        cfg.train.learning_rate = lr;
        const Image image = to_image(img);
        TrainedModel tm;
        {
          py::gil_scoped_release release;
          tm = train_on_image(image, cfg);
        }
        py::dict d = report_dict(tm.report);
        d["pairs"] = tm.pairs;
        d["seconds"] = tm.seconds;
        return py::make_tuple(tm.mlp, d);
      },
      py::arg("image"), py::arg("seed") = 42, py::arg("p") = 10.0, py::arg("runs") = 100,
      py::arg("hidden") = 50, py::arg("epochs") = 30, py::arg("learning_rate") = 0.1,
      "Full pipeline training with the CLI seed derivation. Returns (Mlp, report dict).");

  m.def(
      "segment_auto",
      [](const U8Array& img, const Mlp& mlp, std::uint64_t seed) {
        const Image image = to_image(img);
        AutoSegmentation seg;
        {
          py::gil_scoped_release release;
          seg = segment_auto(image, mlp_decider(mlp), seed);
        }
        return from_labels(seg.labels);
      },
      py::arg("image"), py::arg("mlp"), py::arg("seed") = 0,
      "Labels every pixel; returns an (H, W) uint32 array with labels 1..k.");

  m.def(
      "segment_from_point",
      [](const U8Array& img, const Mlp& mlp, int x, int y) {
        const Image image = to_image(img);
        const PointSegmentation seg = segment_from_point(image, mlp_decider(mlp), {x, y});
        py::array_t<bool> mask({image.height(), image.width()});
        bool* m = mask.mutable_data();
        std::fill(m, m + image.size(), false);
        for (const PixelCoord p : seg.mask) m[image.index(p)] = true;
        return mask;
      },
      py::arg("image"), py::arg("mlp"), py::arg("x"), py::arg("y"),
      "Grows one segment from (x, y); returns an (H, W) bool mask.");

  m.def(
      "render_contours",
      [](const U8Array& img, const py::array_t<std::uint32_t, py::array::c_style | py::array::forcecast>& labels) {
        return from_image(render_contours(to_image(img), to_labels(labels)));
      },
      py::arg("image"), py::arg("labels"));
}
