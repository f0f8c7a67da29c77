// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "ivoro/bench.hpp"
#include "ivoro/error.hpp"
#include "ivoro/geometry.hpp"
#include "ivoro/incremental.hpp"
#include "ivoro/probing.hpp"

using namespace ivoro;
namespace fs = std::filesystem;

namespace {

ProtocolInputs synthetic_inputs(std::size_t classes, std::size_t phases, int augmentations = 1,
                                std::size_t layers = 1, double spread = 10.0) {
  SynthConfig cfg;
  cfg.n_classes = classes;
  cfg.n_dims = 8;
  cfg.samples_per_class = 30;
  cfg.spread = spread;
  cfg.augmentations = augmentations;
  cfg.rotation_offset = augmentations == 4 ? 0.5 : 0.0;
  cfg.layers = layers;
  cfg.seed = 17;
  auto split = synth_benchmark(cfg);
  ProtocolInputs in;
  in.manifest.phases = half_then_even_phases(classes, phases);
  in.manifest.augmentations = augmentations;
  for (std::size_t l = 0; l < layers; ++l) in.manifest.layers.push_back({"layer" + std::to_string(l), "", ""});
  in.train = std::move(split.train);
  in.test = std::move(split.test);
  return in;
}

RunConfig quick_config(const std::string& mode) {
  RunConfig cfg;
  cfg.mode = parse_mode(mode);
  cfg.probe.epochs = 5;
  cfg.probe.learning_rate = 0.01;
  cfg.transform.shift = 1.0;
  cfg.seed = 3;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ivoro_bench_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("mode strings") {
    CHECK(parse_mode("") == ModeFlags{});
    const auto m = parse_mode("NDAIL");
    CHECK(m.normalize);
    CHECK(m.dnc);
    CHECK(m.integration);
    CHECK(m.layered);
    CHECK_FALSE(m.residual);
    CHECK(m.to_string() == "NDAIL");
    CHECK(parse_mode("RDN").to_string() == "NDR");
    CHECK_THROWS_AS(parse_mode("ACAI"), ConfigError);
    CHECK_THROWS_AS(parse_mode("DD"), ConfigError);
    CHECK_THROWS_AS(parse_mode("X"), ConfigError);
    CHECK_THROWS_AS(parse_mode("A"), ConfigError);
  }

  TEST_CASE("run config parsing and validation") {
    const auto cfg = parse_run_config(R"({"mode": "NR", "manifest": "m.json", "seed": 4,
      "probe": {"epochs": 3, "learning_rate": 0.1, "gradient_mode": "coupled"},
      "transform": {"shift": 1, "lambda": 0.7}})",
                                      "/base");
    CHECK(cfg.mode.residual);
    CHECK(cfg.manifest == fs::path("/base/m.json"));
    CHECK(cfg.probe.epochs == 3);
    CHECK(cfg.probe.gradient_mode == GradientMode::coupled);
    CHECK(cfg.transform.lambda == 0.7);
    CHECK(cfg.effective_transform().enabled);
    const auto back = parse_run_config(dump_run_config(cfg));
    CHECK(back.mode == cfg.mode);
    CHECK(back.transform == cfg.transform);
    CHECK(back.seed == 4);

    CHECK_THROWS_AS(parse_run_config(R"({"mode": "ACAI"})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"gamma": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"probe": {"learning_rate": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"mode": "ACL", "gamma": -1})"), ConfigError);
    CHECK_FALSE(parse_run_config(R"({"mode": "D"})").effective_transform().enabled);

    PhaseManifest one_layer;
    one_layer.phases = {{0}};
    one_layer.layers = {{"final", "a", "b"}};
    CHECK_THROWS_AS(quick_config("L").validate(&one_layer), ConfigError);
    CHECK_THROWS_AS(quick_config("AC").validate(&one_layer), ConfigError);
  }

  TEST_CASE("config errors surface before any phase runs") {
    auto in = synthetic_inputs(4, 2);
    CHECK_THROWS_AS(run_protocol(quick_config("AI"), in), ConfigError);
    CHECK_THROWS_AS(run_protocol(quick_config("L"), in), ConfigError);
  }

  TEST_CASE("forgetting fixtures") {
    const std::vector<std::vector<double>> A{{80}, {70}, {60}};
    CHECK(avg_forgetting(A, 0) == 0.0);
    CHECK(avg_forgetting(A, 1) == 10.0);
    CHECK(avg_forgetting(A, 2) == 20.0);
    const std::vector<std::vector<double>> up{{50}, {60, 40}, {70, 45, 10}};
    for (std::size_t t = 0; t < 3; ++t) CHECK(avg_forgetting(up, t) == 0.0);
    const std::vector<std::vector<double>> two{{90}, {80, 70}, {85, 50, 60}};
    CHECK(avg_forgetting(two, 2) == doctest::Approx(((90 - 85) + (70 - 50)) / 2.0));
  }

  TEST_CASE("accuracy_percent") {
    std::vector<LabeledPrediction> p{{1, 1}, {2, 1}, {3, 3}, {4, 4}};
    CHECK(accuracy_percent(p) == 75.0);
    CHECK(accuracy_percent(std::span<const LabeledPrediction>{}) == 0.0);
  }

  TEST_CASE("base mode on separable blobs") {
    SynthConfig cfg;
    cfg.n_classes = 6;
    cfg.spread = 50;
    cfg.covariance_scale = 0.5;
    cfg.seed = 8;
    auto split = synth_benchmark(cfg);
    ProtocolInputs in;
    in.manifest.phases = {{0, 1, 2, 3, 4, 5}};
    in.manifest.layers = {{"final", "", ""}};
    in.train = split.train;
    in.test = split.test;
    const auto r = run_protocol(quick_config(""), in);
    CHECK(r.last_accuracy >= 99.0);
  }

  TEST_CASE("single-phase D predictions equal the probe argmax") {
    auto in = synthetic_inputs(6, 1, 1, 1, 3.0);
    in.manifest.phases = {{0, 1, 2, 3, 4, 5}};
    const auto cfg = quick_config("D");
    const auto r = run_protocol(cfg, in);
    auto probe_cfg = cfg.probe;
    probe_cfg.seed = cfg.seed;
    const auto protos = compute_prototypes(in.train[0]);
    const auto probe = train_probe(in.train[0], probe_cfg, std::span<const Center>(protos));
    REQUIRE(r.predictions[0].size() == in.test[0].size());
    for (std::size_t i = 0; i < in.test[0].size(); ++i) {
      CHECK(r.predictions[0][i].label == in.test[0].labels[i]);
      CHECK(r.predictions[0][i].predicted == probe.class_ids[probe_argmax(probe, in.test[0].row(i))]);
    }
  }

  TEST_CASE("mode \"\" and N without transform give the same report") {
    auto in = synthetic_inputs(8, 3, 1, 1, 3.0);
    auto n = quick_config("N");
    n.transform.enabled = false;
    const auto a = run_protocol(quick_config(""), in);
    const auto b = run_protocol(n, in);
    CHECK(a.accuracy_matrix == b.accuracy_matrix);
    CHECK(a.predictions == b.predictions);
    auto ra = a, rb = b;
    ra.mode = rb.mode = "";
    CHECK(report_to_json(ra) == report_to_json(rb));
  }

  TEST_CASE("accuracies agree with a confusion-matrix recount") {
    for (const std::string mode : {"", "D", "NR", "NDR"}) {
      auto in = synthetic_inputs(10, 4, 1, 1, 2.5);
      const auto r = run_protocol(quick_config(mode), in);
      for (std::size_t t = 0; t < r.phases.size(); ++t) {
        std::map<std::pair<ClassId, ClassId>, std::size_t> confusion;
        for (const auto& p : r.predictions[t]) confusion[{p.label, p.predicted}]++;
        std::size_t total = 0, diag = 0;
        for (const auto& [key, count] : confusion) {
          total += count;
          if (key.first == key.second) diag += count;
        }
        CHECK(r.phase_accuracy[t] == 100.0 * static_cast<double>(diag) / static_cast<double>(total));
        for (std::size_t tau = 0; tau <= t; ++tau) {
          std::size_t n = 0, c = 0;
          for (const auto& [key, count] : confusion) {
            if (std::find(r.phases[tau].begin(), r.phases[tau].end(), key.first) == r.phases[tau].end()) continue;
            n += count;
            if (key.first == key.second) c += count;
          }
          CHECK(r.accuracy_matrix[t][tau] == 100.0 * static_cast<double>(c) / static_cast<double>(n));
        }
        double running = 0;
        for (std::size_t s = 0; s <= t; ++s) running += r.phase_accuracy[s];
        CHECK(r.avg_accuracy[t] == doctest::Approx(running / static_cast<double>(t + 1)).epsilon(1e-12));
        CHECK(r.avg_forgetting[t] == avg_forgetting(r.accuracy_matrix, t));
      }
      CHECK(r.last_accuracy == r.phase_accuracy.back());
    }
  }

  TEST_CASE("base mode never raises old-task accuracy") {
    auto in = synthetic_inputs(10, 4, 1, 1, 2.5);
    const auto r = run_protocol(quick_config(""), in);
    for (std::size_t tau = 0; tau < r.phases.size(); ++tau)
      for (std::size_t t = tau + 1; t < r.phases.size(); ++t)
        CHECK(r.accuracy_matrix[t][tau] <= r.accuracy_matrix[t - 1][tau]);
  }

  TEST_CASE("far apart new classes leave old accuracy intact") {
    auto in = synthetic_inputs(10, 4, 1, 1, 200.0);
    const auto r = run_protocol(quick_config(""), in);
    for (std::size_t tau = 0; tau < r.phases.size(); ++tau)
      for (std::size_t t = tau; t < r.phases.size(); ++t) CHECK(r.accuracy_matrix[t][tau] == r.accuracy_matrix[tau][tau]);
  }

  TEST_CASE("augmented and layered modes run") {
    auto in = synthetic_inputs(8, 2, 4, 2, 3.0);
    for (const std::string mode : {"AC", "AI", "NDAI", "L", "NDRACL", "RAIL"}) {
      CAPTURE(mode);
      const auto r = run_protocol(quick_config(mode), in);
      CHECK(r.phase_accuracy.size() == 2);
      for (const auto& row : r.accuracy_matrix)
        for (double a : row) {
          CHECK(a >= 0.0);
          CHECK(a <= 100.0);
        }
      if (parse_mode(mode).augmented()) {
        CHECK(r.class_uncertainty.size() == 8);
        for (const auto& c : r.class_uncertainty) CHECK(c.mean_hv >= 0.0);
      } else {
        CHECK(r.class_uncertainty.empty());
      }
    }
    auto diag = quick_config("AC");
    diag.diagonal_augmentation = true;
    CHECK_NOTHROW(run_protocol(diag, in));
  }

  TEST_CASE("runs are deterministic") {
    auto in = synthetic_inputs(8, 3, 1, 1, 2.5);
    const auto a = run_protocol(quick_config("NDR"), in);
    const auto b = run_protocol(quick_config("NDR"), in);
    CHECK(report_to_json(a) == report_to_json(b));
    CHECK(a.predictions == b.predictions);
  }

  TEST_CASE("report files") {
    TempDir dir;
    auto in = synthetic_inputs(8, 3, 1, 1, 2.5);
    const auto r = run_protocol(quick_config("D"), in);
    emit_report(r, dir.path / "one");
    emit_report(r, dir.path / "two");
    for (const char* f : {kReportJson, kReportCsv, kReportSvg}) {
      CHECK(fs::exists(dir.path / "one" / f));
      CHECK(slurp(dir.path / "one" / f) == slurp(dir.path / "two" / f));
    }
    const std::string svg = slurp(dir.path / "one" / kReportSvg);
    std::size_t series = 0, points = 0;
    for (std::size_t p = svg.find("class=\"series\""); p != std::string::npos; p = svg.find("class=\"series\"", p + 1))
      ++series;
    for (std::size_t p = svg.find("class=\"point\""); p != std::string::npos; p = svg.find("class=\"point\"", p + 1))
      ++points;
    CHECK(series == 2);
    CHECK(points == 6);

    const auto back = load_report(dir.path / "one" / kReportJson);
    CHECK(back.accuracy_matrix == r.accuracy_matrix);
    CHECK(back.avg_forgetting == r.avg_forgetting);
    CHECK(report_to_json(back) == report_to_json(r));

    CHECK_THROWS(emit_report(EvalReport{}, dir.path / "empty"));
    std::ofstream(dir.path / "file") << "x";
    CHECK_THROWS_AS(emit_report(r, dir.path / "file" / "sub"), Error);
  }
}
