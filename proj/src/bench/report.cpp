// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ivoro/bench.hpp"
#include "ivoro/error.hpp"

namespace ivoro {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void check_nonempty(const EvalReport& r) {
  if (r.accuracy_matrix.empty() || r.phase_accuracy.empty()) throw DataError("report has an empty accuracy matrix");
  for (std::size_t t = 0; t < r.accuracy_matrix.size(); ++t) {
    if (r.accuracy_matrix[t].size() > t + 1) throw DataError("accuracy matrix row " + std::to_string(t) + " is too long");
  }
}

}  // namespace

std::string report_to_json(const EvalReport& r) {
  check_nonempty(r);
  json doc;
  doc["format"] = "ivoro-report";
  doc["version"] = 1;
  doc["mode"] = r.mode;
  doc["phases"] = r.phases;
  doc["accuracy_matrix"] = r.accuracy_matrix;
  doc["phase_accuracy"] = r.phase_accuracy;
  doc["avg_accuracy"] = r.avg_accuracy;
  doc["last_accuracy"] = r.last_accuracy;
  doc["avg_forgetting"] = r.avg_forgetting;
  doc["class_uncertainty"] = json::array();
  for (const auto& u : r.class_uncertainty) {
    doc["class_uncertainty"].push_back({{"class_id", u.class_id},
                                        {"mean_hv", u.mean_hv},
                                        {"baseline_accuracy", u.baseline_accuracy},
                                        {"augmented_accuracy", u.augmented_accuracy},
                                        {"delta_accuracy", u.delta_accuracy()}});
  }
  doc["hv_delta_pearson"] = r.hv_delta_pearson ? json(*r.hv_delta_pearson) : json(nullptr);
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& r) {
  check_nonempty(r);
  const std::size_t T = r.accuracy_matrix.size();
  std::ostringstream out;
  out << "phase,phase_accuracy,avg_accuracy,avg_forgetting";
  for (std::size_t tau = 0; tau < T; ++tau) out << ",task_" << tau;
  out << "\n";
  for (std::size_t t = 0; t < T; ++t) {
    out << t << ',' << fixed(r.phase_accuracy.at(t)) << ',' << fixed(r.avg_accuracy.at(t)) << ','
        << fixed(r.avg_forgetting.at(t));
    for (std::size_t tau = 0; tau < T; ++tau) {
      out << ',';
      if (tau < r.accuracy_matrix[t].size()) out << fixed(r.accuracy_matrix[t][tau]);
    }
    out << "\n";
  }
  return out.str();
}

std::string report_to_svg(const EvalReport& r) {
  check_nonempty(r);
  constexpr double width = 640, height = 400, left = 60, right = 20, top = 30, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  const std::size_t T = r.phase_accuracy.size();
  auto x_of = [&](std::size_t t) { return left + (T > 1 ? plot_w * static_cast<double>(t) / (T - 1) : plot_w / 2); };
  auto y_of = [&](double acc) { return top + plot_h * (1.0 - std::clamp(acc, 0.0, 100.0) / 100.0); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<title>Top-1 accuracy per phase (mode " << (r.mode.empty() ? "base" : r.mode) << ")</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h << "\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
      << top + plot_h << "\"/>\n";
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int tick = 0; tick <= 100; tick += 20) {
    out << "<text x=\"" << left - 8 << "\" y=\"" << fixed(y_of(tick), 2) << "\" text-anchor=\"end\">" << tick
        << "</text>\n";
  }
  for (std::size_t t = 0; t < T; ++t) {
    out << "<text x=\"" << fixed(x_of(t), 2) << "\" y=\"" << top + plot_h + 16 << "\" text-anchor=\"middle\">" << t
        << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">phase</text>\n";
  out << "<text x=\"14\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 14 " << top + plot_h / 2
      << ")\" text-anchor=\"middle\">accuracy (%)</text>\n</g>\n";

  struct Series {
    const char* name;
    const char* color;
    const std::vector<double>* values;
  };
  const Series series[] = {{"phase_accuracy", "#1f77b4", &r.phase_accuracy}, {"avg_accuracy", "#d62728", &r.avg_accuracy}};
  for (const auto& s : series) {
    out << "<g class=\"series\" id=\"" << s.name << "\" stroke=\"" << s.color << "\" fill=\"" << s.color << "\">\n";
    out << "<polyline fill=\"none\" stroke-width=\"2\" points=\"";
    for (std::size_t t = 0; t < s.values->size(); ++t) {
      out << (t ? " " : "") << fixed(x_of(t), 2) << ',' << fixed(y_of((*s.values)[t]), 2);
    }
    out << "\"/>\n";
    for (std::size_t t = 0; t < s.values->size(); ++t) {
      out << "<circle class=\"point\" cx=\"" << fixed(x_of(t), 2) << "\" cy=\"" << fixed(y_of((*s.values)[t]), 2)
          << "\" r=\"3\"/>\n";
    }
    out << "</g>\n";
  }
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (std::size_t i = 0; i < 2; ++i) {
    const double y = top + 12 + 14 * static_cast<double>(i);
    out << "<rect x=\"" << left + plot_w - 130 << "\" y=\"" << y - 8 << "\" width=\"10\" height=\"10\" fill=\""
        << series[i].color << "\"/>\n";
    out << "<text x=\"" << left + plot_w - 115 << "\" y=\"" << y << "\">" << series[i].name << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

void emit_report(const EvalReport& r, const std::filesystem::path& dir) {
  check_nonempty(r);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCategory::runtime, "output directory " + dir.string() + " is not writable");
  }
  const std::pair<const char*, std::string> files[] = {
      {kReportJson, report_to_json(r)}, {kReportCsv, report_to_csv(r)}, {kReportSvg, report_to_svg(r)}};
  for (const auto& [name, text] : files) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::runtime, "cannot write " + (dir / name).string());
    out << text;
    if (!out) throw Error(ErrorCategory::runtime, "write failed: " + (dir / name).string());
  }
}

EvalReport parse_report(const std::string& json_text) {
  EvalReport r;
  try {
    const json doc = json::parse(json_text);
    if (doc.value("format", std::string{}) != "ivoro-report") throw DataError("not an ivoro report");
    r.mode = doc.at("mode").get<std::string>();
    r.phases = doc.at("phases").get<std::vector<std::vector<ClassId>>>();
    r.accuracy_matrix = doc.at("accuracy_matrix").get<std::vector<std::vector<double>>>();
    r.phase_accuracy = doc.at("phase_accuracy").get<std::vector<double>>();
    r.avg_accuracy = doc.at("avg_accuracy").get<std::vector<double>>();
    r.last_accuracy = doc.at("last_accuracy").get<double>();
    r.avg_forgetting = doc.at("avg_forgetting").get<std::vector<double>>();
    for (const auto& u : doc.at("class_uncertainty")) {
      r.class_uncertainty.push_back({u.at("class_id").get<ClassId>(), u.at("mean_hv").get<double>(),
                                     u.at("baseline_accuracy").get<double>(), u.at("augmented_accuracy").get<double>()});
    }
    if (!doc.at("hv_delta_pearson").is_null()) r.hv_delta_pearson = doc.at("hv_delta_pearson").get<double>();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  check_nonempty(r);
  return r;
}

EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_report(ss.str());
}

}  // namespace ivoro
