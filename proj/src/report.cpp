#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "leadsel/experiments.hpp"

namespace leadsel {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot open for writing: " + p.string());
  return out;
}

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentReport& r) {
  out << "algorithm,k,mode,trials,mean_t_e,min_t_e,max_t_e,range_t_e,mean_lambda_min,failures\n";
  for (const auto& c : r.cells) {
    const CellStats& s = c.stats;
    out << algorithm_name(c.algorithm) << ',' << c.k << ',' << mode_name(c.mode) << ',' << s.trials << ','
        << format_double(s.mean_t_e) << ',' << format_double(s.min_t_e) << ',' << format_double(s.max_t_e) << ','
        << format_double(s.range_t_e()) << ',' << format_double(s.mean_lambda_min) << ',' << s.failures << '\n';
  }
}

std::string report_to_json(const ExperimentReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    const CellStats& s = c.stats;
    cells.push_back({{"algorithm", algorithm_name(c.algorithm)},
                     {"k", c.k},
                     {"mode", mode_name(c.mode)},
                     {"trials", s.trials},
                     {"mean_t_e", number_or_null(s.mean_t_e)},
                     {"min_t_e", number_or_null(s.min_t_e)},
                     {"max_t_e", number_or_null(s.max_t_e)},
                     {"range_t_e", number_or_null(s.range_t_e())},
                     {"mean_lambda_min", number_or_null(s.mean_lambda_min)},
                     {"failures", s.failures}});
  }
  return json{{"cells", cells}}.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  ExperimentReport r;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed report JSON: ") + e.what());
  }
  for (const auto& j : doc.at("cells")) {
    ReportCell c;
    const auto algo = parse_algorithm(j.at("algorithm").get<std::string>());
    if (!algo) throw ParameterError("unknown algorithm in report JSON");
    c.algorithm = *algo;
    c.k = j.at("k").get<Index>();
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "free" && mode != "capped") throw ParameterError("unknown mode in report JSON: " + mode);
    c.mode = mode == "free" ? Mode::Free : Mode::Capped;
    c.stats.trials = j.at("trials").get<int>();
    c.stats.mean_t_e = number_from(j.at("mean_t_e"));
    c.stats.min_t_e = number_from(j.at("min_t_e"));
    c.stats.max_t_e = number_from(j.at("max_t_e"));
    c.stats.mean_lambda_min = number_from(j.at("mean_lambda_min"));
    c.stats.failures = j.at("failures").get<int>();
    r.cells.push_back(c);
  }
  return r;
}

void emit_report(const std::string& dir, const ExperimentReport& r) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw IoError("cannot create directory " + root.string() + ": " + ec.message());

  {
    auto out = open_out(root / "report.csv");
    write_report_csv(out, r);
    if (!out) throw IoError("write failed: " + (root / "report.csv").string());
  }
  {
    auto out = open_out(root / "report.json");
    out << report_to_json(r);
    if (!out) throw IoError("write failed: " + (root / "report.json").string());
  }

  // One file per (figure, algorithm, mode): "k value" lines in k order.
  std::map<fs::path, std::vector<const ReportCell*>> plots;
  for (const auto& c : r.cells) {
    const std::string suffix = std::string(algorithm_name(c.algorithm)) + "_" + std::string(mode_name(c.mode)) + ".dat";
    for (const char* fig : {"time_", "rate_", "range_"}) plots[root / (fig + suffix)].push_back(&c);
  }
  for (auto& [path, cells] : plots) {
    std::sort(cells.begin(), cells.end(), [](auto* a, auto* b) { return a->k < b->k; });
    auto out = open_out(path);
    const std::string name = path.filename().string();
    for (const ReportCell* c : cells) {
      double v = c->stats.mean_t_e;
      if (name.starts_with("rate_")) v = c->stats.mean_lambda_min;
      if (name.starts_with("range_")) v = c->stats.range_t_e();
      out << c->k << ' ' << format_double(v) << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
  }
}

std::vector<std::pair<Algorithm, double>> rank_by_rate(const ExperimentReport& r) {
  std::map<Algorithm, std::pair<double, int>> acc;
  for (const auto& c : r.cells) {
    if (c.mode != Mode::Free || !std::isfinite(c.stats.mean_lambda_min)) continue;
    acc[c.algorithm].first += c.stats.mean_lambda_min;
    acc[c.algorithm].second += 1;
  }
  std::vector<std::pair<Algorithm, double>> out;
  for (const auto& [a, s] : acc) out.emplace_back(a, s.first / s.second);
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  return out;
}

namespace {
std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) rank[order[t]] = r;
    i = j + 1;
  }
  return rank;
}
}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("spearman needs two equal-length samples (n >= 2)");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace leadsel
