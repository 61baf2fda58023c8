#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "roby/analysis.hpp"
#include "roby/error.hpp"
#include "roby/io/text.hpp"
#include "roby/metrics.hpp"

namespace roby::io {

enum class ReportFormat { Json, Csv };

inline ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw Error(ErrorCode::InvalidSpec, "unknown report format '" + std::string(text) + "' (expected json or csv)");
}

namespace detail {

inline std::string quote(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

inline void append_pairs(std::string& out, std::span<const double> values, std::size_t num_classes) {
  const auto pairs = class_pairs(num_classes);
  out += '[';
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (n) out += ',';
    out += "{\"i\":" + std::to_string(pairs[n].i) + ",\"j\":" + std::to_string(pairs[n].j) +
           ",\"value\":" + format_real(values[n]) + '}';
  }
  out += ']';
}

}  // namespace detail

/// Every real is written with 17 significant digits, so parsing the text back
/// recovers each value exactly.
inline std::string report_to_json(const MetricReport& r) {
  std::string out = "{";
  out += "\"model\":" + detail::quote(r.model);
  out += ",\"distance\":" + detail::quote(r.distance.to_string());
  out += ",\"normalization\":" + detail::quote(r.normalization);
  out += ",\"num_classes\":" + std::to_string(r.num_classes);
  out += ",\"dims\":" + std::to_string(r.dims);
  out += ",\"num_records\":" + std::to_string(r.num_records);
  out += ",\"fsa\":" + format_real(r.fsa);
  out += ",\"fsd\":" + format_real(r.fsd);
  out += ",\"roby\":" + format_real(r.roby);
  out += ",\"fsa_per_class\":[";
  for (std::size_t k = 0; k < r.fsa_per_class.size(); ++k) {
    if (k) out += ',';
    out += format_real(r.fsa_per_class[k]);
  }
  out += "],\"fsd_per_pair\":";
  detail::append_pairs(out, r.fsd_per_pair, r.num_classes);
  out += ",\"roby_per_pair\":";
  detail::append_pairs(out, r.roby_per_pair, r.num_classes);
  out += ",\"warning\":" + (r.warning ? detail::quote(*r.warning) : std::string("null"));
  out += "}\n";
  return out;
}

inline MetricReport report_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    MetricReport r;
    r.model = j.at("model").get<std::string>();
    r.distance = DistanceSpec::parse(j.at("distance").get<std::string>());
    r.normalization = j.at("normalization").get<std::string>();
    r.num_classes = j.at("num_classes").get<std::size_t>();
    r.dims = j.at("dims").get<std::size_t>();
    r.num_records = j.at("num_records").get<std::size_t>();
    r.fsa = j.at("fsa").get<double>();
    r.fsd = j.at("fsd").get<double>();
    r.roby = j.at("roby").get<double>();
    r.fsa_per_class = j.at("fsa_per_class").get<std::vector<double>>();
    const auto pairs = class_pairs(r.num_classes);
    auto read_pairs = [&](const nlohmann::json& arr) {
      if (arr.size() != pairs.size()) throw Error(ErrorCode::MalformedValue, "pair list has the wrong length");
      std::vector<double> out;
      for (std::size_t n = 0; n < arr.size(); ++n) {
        if (arr[n].at("i").get<std::size_t>() != pairs[n].i || arr[n].at("j").get<std::size_t>() != pairs[n].j) {
          throw Error(ErrorCode::MalformedValue, "pair list is not in lexicographic order");
        }
        out.push_back(arr[n].at("value").get<double>());
      }
      return out;
    };
    r.fsd_per_pair = read_pairs(j.at("fsd_per_pair"));
    r.roby_per_pair = read_pairs(j.at("roby_per_pair"));
    if (j.contains("warning") && !j.at("warning").is_null()) r.warning = j.at("warning").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedValue, std::string("report JSON: ") + e.what());
  }
}

/// Long format, one row per value: `quantity,i,j,value`, preceded by
/// `# key=value` metadata lines. Aggregates leave i and j empty; per-class
/// rows leave j empty.
inline std::string report_to_csv(const MetricReport& r) {
  std::string out;
  out += "# model=" + r.model + '\n';
  out += "# distance=" + r.distance.to_string() + '\n';
  out += "# normalization=" + r.normalization + '\n';
  if (r.warning) out += "# warning=" + *r.warning + '\n';
  out += "quantity,i,j,value\n";
  out += "fsa,,," + format_real(r.fsa) + '\n';
  out += "fsd,,," + format_real(r.fsd) + '\n';
  out += "roby,,," + format_real(r.roby) + '\n';
  for (std::size_t k = 0; k < r.fsa_per_class.size(); ++k) {
    out += "fsa_class," + std::to_string(k) + ",," + format_real(r.fsa_per_class[k]) + '\n';
  }
  const auto pairs = class_pairs(r.num_classes);
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    out += "fsd_pair," + std::to_string(pairs[n].i) + ',' + std::to_string(pairs[n].j) + ',' +
           format_real(r.fsd_per_pair[n]) + '\n';
  }
  for (std::size_t n = 0; n < pairs.size(); ++n) {
    out += "roby_pair," + std::to_string(pairs[n].i) + ',' + std::to_string(pairs[n].j) + ',' +
           format_real(r.roby_per_pair[n]) + '\n';
  }
  return out;
}

/// `column_x,column_y,r,n,dataset`.
inline std::string correlations_to_csv(std::span<const CorrelationResult> results) {
  std::string out = "column_x,column_y,r,n,dataset\n";
  for (const auto& c : results) {
    out += c.column_x + ',' + c.column_y + ',' + format_real(c.r) + ',' + std::to_string(c.n) + ',' + c.dataset +
           '\n';
  }
  return out;
}

inline std::string correlations_to_json(std::span<const CorrelationResult> results) {
  std::string out = "[";
  for (std::size_t n = 0; n < results.size(); ++n) {
    const auto& c = results[n];
    if (n) out += ',';
    out += "{\"column_x\":" + detail::quote(c.column_x) + ",\"column_y\":" + detail::quote(c.column_y) +
           ",\"r\":" + format_real(c.r) + ",\"n\":" + std::to_string(c.n) + ",\"dataset\":" + detail::quote(c.dataset) +
           '}';
  }
  out += "]\n";
  return out;
}

inline void write_report(const MetricReport& r, const std::filesystem::path& path, ReportFormat format) {
  write_file(path, format == ReportFormat::Json ? report_to_json(r) : report_to_csv(r));
}

inline void write_report(std::span<const CorrelationResult> results, const std::filesystem::path& path,
                         ReportFormat format) {
  write_file(path, format == ReportFormat::Json ? correlations_to_json(results) : correlations_to_csv(results));
}

}  // namespace roby::io
