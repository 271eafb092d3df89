#pragma once

// Serialization of comparison records and aggregates. Output is a pure
// function of its inputs (no timestamps, fixed number formatting).

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"  // nlohmann/json, vendored

#include "otsubis/analysis.hpp"

namespace otsubis {

/// Insertion-ordered JSON so keys appear in declaration order.
using Json = nlohmann::ordered_json;

enum class ReportFormat { Csv, Markdown, Json };

/// Fixed-point text, rounding halves away from zero (90.625 -> "90.63").
inline std::string fixed(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, std::round(v * scale) / scale);
  return buf;
}

/// Quotes a CSV field when it contains a separator, quote or newline.
inline std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(v);
  std::string q = "\"";
  for (const char c : v) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline std::string render_records_csv(const std::vector<ComparisonRecord>& records) {
  std::ostringstream out;
  out << "image,otsu_threshold,optimized_threshold,otsu_iterations,optimized_iterations,"
         "otsu_computations,optimized_computations,optimized_raw_evaluations,deviation,reduction_percent\n";
  for (const auto& r : records) {
    out << csv_field(r.id) << ',' << r.t_exhaustive << ',' << r.t_bisection << ',' << r.iterations_exhaustive << ','
        << r.iterations_bisection << ',' << r.cost_exhaustive << ',' << r.cost_bisection << ','
        << r.raw_evaluations_bisection << ',' << r.deviation << ',' << fixed(r.reduction_percent, 2) << '\n';
  }
  return out.str();
}

/// Exhaustive vs bisection cost table (mean / minimum / maximum rows).
inline std::string render_efficiency_csv(const AggregateStats& st) {
  std::ostringstream out;
  out << "algorithm,variance_computations,iterations,reduction_percent\n"
      << "Exhaustive OTSU,256.0,256.0,-\n"
      << "Bisection (mean)," << fixed(st.computations.mean, 1) << ',' << fixed(st.iterations.mean, 1) << ','
      << fixed(st.mean_reduction_percent, 2) << '\n'
      << "Bisection (minimum)," << fixed(st.computations.min, 1) << ',' << fixed(st.iterations.min, 1) << ','
      << fixed(st.max_reduction_percent, 2) << '\n'
      << "Bisection (maximum)," << fixed(st.computations.max, 1) << ',' << fixed(st.iterations.max, 1) << ','
      << fixed(st.min_reduction_percent, 2) << '\n';
  return out.str();
}

/// Deviation buckets with cumulative percentages.
inline std::string render_accuracy_csv(const AggregateStats& st) {
  std::ostringstream out;
  out << "deviation_range,image_count,cumulative_percent\n";
  for (const auto& b : st.buckets) out << b.label << ',' << b.count << ',' << fixed(b.cumulative_percent, 2) << '\n';
  out << "Mean absolute deviation," << fixed(st.mean_abs_deviation, 1) << ",\n";
  out << "Maximum deviation," << st.max_deviation << ",\n";
  return out.str();
}

inline std::string render_category_csv(const std::vector<CategoryStats>& cats) {
  std::ostringstream out;
  out << "category,count,mean_iterations,mean_deviation,efficiency_percent\n";
  for (const auto& c : cats)
    out << csv_field(c.category) << ',' << c.count << ',' << fixed(c.mean_iterations, 1) << ',' << fixed(c.mean_deviation, 1)
        << ',' << fixed(c.efficiency_percent, 1) << '\n';
  return out.str();
}

inline Json to_json(const ComparisonRecord& r) {
  return {{"image", r.id},
          {"otsu_threshold", r.t_exhaustive},
          {"optimized_threshold", r.t_bisection},
          {"otsu_iterations", r.iterations_exhaustive},
          {"optimized_iterations", r.iterations_bisection},
          {"otsu_computations", r.cost_exhaustive},
          {"optimized_computations", r.cost_bisection},
          {"optimized_raw_evaluations", r.raw_evaluations_bisection},
          {"deviation", r.deviation},
          {"reduction_percent", r.reduction_percent}};
}

inline Json to_json(const Summary& s) {
  return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"stddev", s.stddev}};
}

inline Json to_json(const AggregateStats& st) {
  Json buckets = Json::array();
  for (const auto& b : st.buckets) {
    buckets.push_back({{"label", b.label},
                       {"min", b.lo},
                       {"max", b.hi ? Json(*b.hi) : Json(nullptr)},
                       {"count", b.count},
                       {"cumulative_percent", b.cumulative_percent}});
  }
  return {{"records", st.records},
          {"computations", to_json(st.computations)},
          {"iterations", to_json(st.iterations)},
          {"raw_evaluations", to_json(st.raw_evaluations)},
          {"mean_reduction_percent", st.mean_reduction_percent},
          {"min_reduction_percent", st.min_reduction_percent},
          {"max_reduction_percent", st.max_reduction_percent},
          {"deviation_buckets", buckets},
          {"mean_abs_deviation", st.mean_abs_deviation},
          {"deviation_stddev", st.deviation_stddev},
          {"max_deviation", st.max_deviation}};
}

inline Json to_json(const CategoryStats& c) {
  return {{"category", c.category},
          {"count", c.count},
          {"mean_iterations", c.mean_iterations},
          {"mean_deviation", c.mean_deviation},
          {"efficiency_percent", c.efficiency_percent}};
}

inline Json to_json(const ThresholdResult& r) {
  return {{"method", std::string(to_string(r.method))},
          {"threshold", r.threshold},
          {"iterations", r.iterations},
          {"reported_cost", r.reported_cost},
          {"raw_evaluations", r.raw_evaluations}};
}

inline Json to_json(const SearchStep& s, std::size_t index) {
  auto opt = [](const auto& v) { return v ? Json(*v) : Json(nullptr); };
  return {{"step", index + 1},
          {"t_low", s.triplet.low},
          {"t_mid", s.triplet.mid},
          {"t_high", s.triplet.high},
          {"t1", opt(s.t1)},
          {"t2", opt(s.t2)},
          {"sigma_t1", opt(s.sigma_t1)},
          {"sigma_mid", opt(s.sigma_mid)},
          {"sigma_t2", opt(s.sigma_t2)},
          {"decision", std::string(to_string(s.decision))},
          {"raw_evaluations", s.raw_evaluations},
          {"reported_cost", s.reported_cost}};
}

/// One compact JSON object per line.
inline std::string render_trace_jsonl(const SearchTrace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) out += to_json(trace.steps[i], i).dump() + "\n";
  return out;
}

inline Json to_json(const UnimodalityReport& r) {
  Json maxima = Json::array();
  for (const auto& p : r.local_maxima) maxima.push_back({p.start, p.end});
  return {{"is_unimodal", r.is_unimodal},
          {"local_maxima", maxima},
          {"argmax_plateau", {r.argmax_plateau.start, r.argmax_plateau.end}},
          {"strict_peak", r.strict_peak()},
          {"init_condition_holds", r.init_condition_holds}};
}

namespace detail {

inline std::string render_markdown(const AggregateStats& st, const std::vector<ComparisonRecord>& records,
                                   const std::vector<CategoryStats>& categories) {
  std::ostringstream out;
  out << "## Per-image results\n\n"
      << "| Image | OTSU threshold | Optimized threshold | OTSU iterations | Optimized iterations "
         "| OTSU computations | Optimized computations |\n"
      << "|---|---|---|---|---|---|---|\n";
  for (const auto& r : records) {
    out << "| " << r.id << " | " << r.t_exhaustive << " | " << r.t_bisection << " | " << r.iterations_exhaustive
        << " | " << r.iterations_bisection << " | " << r.cost_exhaustive << " | " << r.cost_bisection << " |\n";
  }

  out << "\n## Computational performance (" << st.records << " images)\n\n"
      << "| Algorithm | Variance Computations | Iterations | Reduction (%) |\n"
      << "|---|---|---|---|\n"
      << "| Exhaustive OTSU | 256.0 | 256.0 | - |\n"
      << "| Bisection (mean) | " << fixed(st.computations.mean, 1) << " | " << fixed(st.iterations.mean, 1) << " | "
      << fixed(st.mean_reduction_percent, 2) << " |\n"
      << "| Bisection (minimum) | " << fixed(st.computations.min, 1) << " | " << fixed(st.iterations.min, 1)
      << " | " << fixed(st.max_reduction_percent, 2) << " |\n"
      << "| Bisection (maximum) | " << fixed(st.computations.max, 1) << " | " << fixed(st.iterations.max, 1)
      << " | " << fixed(st.min_reduction_percent, 2) << " |\n";

  out << "\n## Threshold accuracy (" << st.records << " images)\n\n"
      << "| Deviation Range | Image Count | Cumulative Percentage |\n"
      << "|---|---|---|\n";
  for (const auto& b : st.buckets)
    out << "| " << b.label << " | " << b.count << " | " << fixed(b.cumulative_percent, 2) << "% |\n";
  out << "| Mean absolute deviation | " << fixed(st.mean_abs_deviation, 1) << " gray levels | |\n"
      << "| Maximum deviation | " << st.max_deviation << " gray levels | |\n";

  if (!categories.empty()) {
    out << "\n## Performance by category\n\n"
        << "| Image Category | Count | Mean Iterations | Mean Deviation | Efficiency (%) |\n"
        << "|---|---|---|---|---|\n";
    for (const auto& c : categories)
      out << "| " << c.category << " | " << c.count << " | " << fixed(c.mean_iterations, 1) << " | "
          << fixed(c.mean_deviation, 1) << " levels | " << fixed(c.efficiency_percent, 1) << " |\n";
  }
  return out.str();
}

}  // namespace detail

/// CSV carries the per-image rows only; Markdown and JSON add the aggregate
/// tables (and the category table when one is given).
inline std::string render_report(const AggregateStats& st, const std::vector<ComparisonRecord>& records,
                                 ReportFormat format, const std::vector<CategoryStats>& categories = {}) {
  switch (format) {
    case ReportFormat::Csv: return render_records_csv(records);
    case ReportFormat::Markdown: return detail::render_markdown(st, records, categories);
    case ReportFormat::Json: {
      Json doc;
      doc["records"] = Json::array();
      for (const auto& r : records) doc["records"].push_back(to_json(r));
      doc["aggregate"] = to_json(st);
      if (!categories.empty()) {
        doc["categories"] = Json::array();
        for (const auto& c : categories) doc["categories"].push_back(to_json(c));
      }
      return doc.dump(2) + "\n";
    }
  }
  return {};
}

}  // namespace otsubis
