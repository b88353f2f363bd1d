// bindings/module.cc

// Copyright 2026  The nmmhmm Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <memory>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nmmhmm/classifier.h"
#include "nmmhmm/config-json.h"
#include "nmmhmm/model-io.h"
#include "nmmhmm/noise.h"
#include "nmmhmm/synthetic.h"
#include "nmmhmm/trainer.h"

namespace py = pybind11;
using namespace nmmhmm;

namespace {

nlohmann::json PyToJson(const py::handle& obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<int64_t>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::dict>(obj)) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& item : obj.cast<py::dict>())
      j[item.first.cast<std::string>()] = PyToJson(item.second);
    return j;
  }
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& item : obj.cast<py::sequence>()) j.push_back(PyToJson(item));
    return j;
  }
  throw std::runtime_error("unsupported option value type");
}

TrainConfig OptionsToTrainConfig(const py::dict& options) {
  return TrainConfigFromJson(PyToJson(options));
}

FeatureConfig OptionsToFeatureConfig(const py::dict& options) {
  return FeatureConfigFromJson(PyToJson(options));
}

AudioBuffer MakeBuffer(const Vector& samples, int sample_rate_hz) {
  AudioBuffer buf;
  buf.sample_rate_hz = sample_rate_hz;
  buf.samples.assign(samples.data(), samples.data() + samples.size());
  return buf;
}

Vector ToVector(const AudioBuffer& buf) {
  return Eigen::Map<const Vector>(buf.samples.data(),
                                  static_cast<Eigen::Index>(buf.samples.size()));
}

struct PyModel {
  HmmModel model;
};

struct PyModelSet {
  std::vector<HmmModel> models;

  explicit PyModelSet(const std::vector<std::shared_ptr<PyModel>>& items) {
    for (const auto& item : items) models.push_back(item->model.Clone());
  }

  py::tuple Classify(const Matrix& frames, bool length_normalize) const {
    FeatureSequence seq;
    seq.frames = frames;
    const ClassifyResult result = nmmhmm::Classify(models, seq, length_normalize);
    std::vector<double> scores(result.log_likelihoods.data(),
                               result.log_likelihoods.data() + result.log_likelihoods.size());
    return py::make_tuple(models[static_cast<std::size_t>(result.best_index)].label, scores);
  }

  double Evaluate(const std::vector<Matrix>& sequences, const std::vector<std::string>& labels,
                  bool length_normalize, int jobs) const {
    if (sequences.size() != labels.size())
      throw std::invalid_argument("evaluate: sequences and labels must have equal length");
    std::vector<LabeledSequence> test;
    test.reserve(sequences.size());
    for (std::size_t i = 0; i < sequences.size(); ++i)
      test.push_back({FeatureSequence{sequences[i], 0.01, ""}, labels[i]});
    EvalOptions options;
    options.length_normalize = length_normalize;
    options.jobs = jobs;
    return nmmhmm::Evaluate(models, test, nullptr, options).Accuracy();
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generative sequence classification: GMM-HMM and NMM-HMM training, "
            "MFCC features and noise harness";

  m.def(
      "extract_features",
      [](const Vector& samples, int sample_rate_hz, const py::dict& options) {
        FeatureConfig config = OptionsToFeatureConfig(options);
        config.sample_rate_hz = sample_rate_hz;
        return ExtractFeatures(MakeBuffer(samples, sample_rate_hz), config).frames;
      },
      py::arg("samples"), py::arg("sample_rate_hz") = 16000,
      py::arg("options") = py::dict(),
      "MFCC+delta features, one row per frame (T x 39 by default)");

  m.def(
      "mfcc",
      [](const Vector& samples, int sample_rate_hz, const py::dict& options) {
        FeatureConfig config = OptionsToFeatureConfig(options);
        config.sample_rate_hz = sample_rate_hz;
        return Mfcc(MakeBuffer(samples, sample_rate_hz), config);
      },
      py::arg("samples"), py::arg("sample_rate_hz") = 16000, py::arg("options") = py::dict(),
      "Static cepstra only (T x 13 by default)");

  m.def(
      "add_deltas", [](const Matrix& feats, int half_window) { return AddDeltas(feats, half_window); },
      py::arg("features"), py::arg("half_window") = 2);

  m.def(
      "synth_noise",
      [](const std::string& kind, int64_t length, uint64_t seed, int sample_rate_hz) {
        NoiseKind k;
        if (kind == "white")
          k = NoiseKind::kWhite;
        else if (kind == "pink")
          k = NoiseKind::kPink;
        else
          throw std::invalid_argument("kind must be 'white' or 'pink'");
        return ToVector(SynthNoise(k, length, seed, sample_rate_hz));
      },
      py::arg("kind"), py::arg("length"), py::arg("seed") = 0, py::arg("sample_rate_hz") = 16000);

  m.def(
      "mix_noise",
      [](const Vector& clean, const Vector& noise, double snr_db, uint64_t offset_seed,
         int sample_rate_hz) {
        return ToVector(MixNoise(MakeBuffer(clean, sample_rate_hz),
                                 MakeBuffer(noise, sample_rate_hz), snr_db, offset_seed));
      },
      py::arg("clean"), py::arg("noise"), py::arg("snr_db"), py::arg("offset_seed") = 0,
      py::arg("sample_rate_hz") = 16000,
      "clean + alpha * noise snippet at the requested SNR");

  m.def(
      "add_feature_noise",
      [](const Matrix& frames, double snr_db, uint64_t seed) {
        return AddFeatureNoise(frames, snr_db, seed);
      },
      py::arg("frames"), py::arg("snr_db"), py::arg("seed") = 0);

  py::class_<PyModel, std::shared_ptr<PyModel>>(m, "Model")
      .def_static(
          "load", [](const std::string& path) { return std::make_shared<PyModel>(LoadModel(path)); },
          py::arg("path"))
      .def("save", [](const PyModel& self, const std::string& path) { SaveModel(path, self.model); },
           py::arg("path"))
      .def("log_likelihood",
           [](const PyModel& self, const Matrix& frames) {
             return SequenceLogLikelihood(self.model, FeatureSequence{frames, 0.01, ""});
           },
           py::arg("frames"))
      .def("sample",
           [](const PyModel& self, int length, uint64_t seed) {
             return SampleSequence(self.model, length, seed).frames;
           },
           py::arg("length"), py::arg("seed") = 0)
      .def_property_readonly("label", [](const PyModel& self) { return self.model.label; })
      .def_property_readonly("num_states", [](const PyModel& self) { return self.model.NumStates(); })
      .def_property_readonly("dim", [](const PyModel& self) { return self.model.Dim(); })
      .def_property_readonly("kind",
                             [](const PyModel& self) { return std::string(self.model.emission->Kind()); });

  m.def(
      "train_model",
      [](const std::vector<Matrix>& sequences, const py::dict& options, const std::string& label) {
        const TrainConfig config = OptionsToTrainConfig(options);
        std::vector<FeatureSequence> data;
        data.reserve(sequences.size());
        for (const auto& frames : sequences) data.push_back({frames, 0.01, ""});
        TrainResult result = TrainClassModel(data, config);
        result.model.label = label;
        return std::make_shared<PyModel>(std::move(result.model));
      },
      py::arg("sequences"), py::arg("options") = py::dict(), py::arg("label") = "class0",
      "Train a single per-class model; options mirror the train config JSON");

  m.def(
      "train_classes",
      [](const py::dict& data, const py::dict& options, int jobs) {
        const TrainConfig config = OptionsToTrainConfig(options);
        std::vector<ClassSequences> dataset;
        for (const auto& item : data) {
          ClassSequences cls;
          cls.label = item.first.cast<std::string>();
          for (const auto& frames : item.second.cast<std::vector<Matrix>>())
            cls.sequences.push_back({frames, 0.01, ""});
          dataset.push_back(std::move(cls));
        }
        std::sort(dataset.begin(), dataset.end(),
                  [](const auto& a, const auto& b) { return a.label < b.label; });
        auto results = TrainAllClasses(dataset, config, jobs);
        std::vector<std::shared_ptr<PyModel>> models;
        for (auto& result : results)
          models.push_back(std::make_shared<PyModel>(std::move(result.model)));
        return models;
      },
      py::arg("data"), py::arg("options") = py::dict(), py::arg("jobs") = 1,
      "Train one model per class from {label: [sequences]}");

  py::class_<PyModelSet>(m, "ModelSet")
      .def(py::init<const std::vector<std::shared_ptr<PyModel>>&>(), py::arg("models"))
      .def("classify", &PyModelSet::Classify, py::arg("frames"),
           py::arg("length_normalize") = false,
           "Returns (best label, per-model log-likelihoods)")
      .def("evaluate", &PyModelSet::Evaluate, py::arg("sequences"), py::arg("labels"),
           py::arg("length_normalize") = false, py::arg("jobs") = 1,
           "Segment classification accuracy in percent");

  m.def(
      "generate_benchmark",
      [](uint64_t seed, bool warped, int train_per_class, int test_per_class) {
        SyntheticDatasetSpec spec = MakeBenchmarkSpec(seed, warped);
        if (train_per_class > 0) spec.train_per_class = train_per_class;
        if (test_per_class > 0) spec.test_per_class = test_per_class;
        const SyntheticDataset dataset = GenerateSyntheticDataset(spec);
        py::dict train, test;
        for (const auto& cls : dataset.classes) {
          std::vector<Matrix> train_frames, test_frames;
          for (const auto& seq : cls.train) train_frames.push_back(seq.frames);
          for (const auto& seq : cls.test) test_frames.push_back(seq.frames);
          train[py::str(cls.label)] = train_frames;
          test[py::str(cls.label)] = test_frames;
        }
        return py::make_tuple(train, test);
      },
      py::arg("seed") = 7, py::arg("warped") = true, py::arg("train_per_class") = -1,
      py::arg("test_per_class") = -1,
      "The fixed synthetic benchmark as ({label: [train]}, {label: [test]})");
}
