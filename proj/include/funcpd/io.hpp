#pragma once

// CSV and JSON I/O. Input CSV: one row per time point, d numeric columns,
// optional header row (auto-detected: first row non-numeric), '.' decimal
// separator, UTF-8. Missing or malformed values are rejected with the
// offending line and column; nothing is imputed. Numbers are written in
// the shortest representation that round-trips a 64-bit double, so
// write -> read is lossless.
//
// Every artifact this library writes embeds a run manifest. Manifests
// contain only run-deterministic fields (command, result-affecting flags,
// version, seed, input checksum): reports with equal seeds are byte-equal
// regardless of thread count. Wall-clock timing goes to the console, not
// into artifacts.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "funcpd/bootstrap.hpp"
#include "funcpd/core.hpp"
#include "funcpd/simulate.hpp"
#include "funcpd/version.hpp"

namespace funcpd {

inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string checksum_hex(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

struct RunManifest {
  std::string command;
  nlohmann::json flags = nlohmann::json::object();
  std::string library_version = kVersion;
  std::uint64_t seed = 0;
  std::string input_checksum;  // empty when the command has no input file

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["flags"] = flags;
    j["library_version"] = library_version;
    j["seed"] = seed;
    if (!input_checksum.empty()) j["input_checksum"] = input_checksum;
    return j;
  }
};

inline std::string manifest_comment(const RunManifest& manifest) {
  return "# funcpd-manifest: " + manifest.to_json().dump();
}

struct CsvReadOptions {
  std::optional<std::size_t> date_column;  // 1-based; stripped into labels
};

struct CsvData {
  FunctionalSample sample;
  std::vector<std::string> labels;  // per-row values of the date column
  bool had_header = false;
  std::vector<std::string> header;
  std::string checksum;  // of the raw file bytes
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view field, double& out) {
  field = trim(field);
  if (field.empty()) return false;
  const auto res = std::from_chars(field.data(), field.data() + field.size(),
                                   out);
  return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

}  // namespace detail

inline CsvData read_sample_csv(const std::string& path,
                               const CsvReadOptions& opts = {}) {
  const std::string bytes = read_file(path);
  std::string_view rest = bytes;
  if (rest.starts_with("\xEF\xBB\xBF")) rest.remove_prefix(3);  // UTF-8 BOM

  std::vector<std::pair<std::size_t, std::string_view>> lines;  // (line_no, text)
  std::size_t line_no = 0;
  while (!rest.empty()) {
    const std::size_t nl = rest.find('\n');
    std::string_view line =
        nl == std::string_view::npos ? rest : rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{}
                                        : rest.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;  // manifest/comments
    lines.emplace_back(line_no, line);
  }
  if (lines.empty()) throw std::runtime_error(path + ": no data rows");

  CsvData out{FunctionalSample(CurveMatrix(2, 1)), {}, false, {}, {}};
  out.checksum = checksum_hex(bytes);

  // Header detection: the first row counts as a header iff at least one
  // of its non-date fields fails numeric parsing.
  auto first_fields = detail::split_fields(lines.front().second);
  bool header = false;
  for (std::size_t c = 0; c < first_fields.size(); ++c) {
    if (opts.date_column && *opts.date_column == c + 1) continue;
    double v;
    if (!detail::parse_double(first_fields[c], v)) {
      header = true;
      break;
    }
  }
  std::size_t start = 0;
  if (header) {
    out.had_header = true;
    for (auto f : first_fields)
      out.header.emplace_back(detail::trim(f));
    start = 1;
  }
  if (lines.size() - start < 2)
    throw std::runtime_error(path + ": need at least 2 data rows, found " +
                             std::to_string(lines.size() - start));

  const std::size_t total_cols = first_fields.size();
  if (opts.date_column &&
      (*opts.date_column < 1 || *opts.date_column > total_cols))
    throw std::runtime_error(path + ": date column " +
                             std::to_string(*opts.date_column) +
                             " out of range (file has " +
                             std::to_string(total_cols) + " columns)");
  const std::size_t d = total_cols - (opts.date_column ? 1 : 0);
  if (d < 1) throw std::runtime_error(path + ": no numeric columns");

  CurveMatrix m(lines.size() - start, d);
  for (std::size_t r = start; r < lines.size(); ++r) {
    const auto [file_line, text] = lines[r];
    const auto fields = detail::split_fields(text);
    if (fields.size() != total_cols)
      throw std::runtime_error(path + " line " + std::to_string(file_line) +
                               ": expected " + std::to_string(total_cols) +
                               " fields, found " +
                               std::to_string(fields.size()));
    auto row = m.row(r - start);
    std::size_t col_out = 0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (opts.date_column && *opts.date_column == c + 1) {
        out.labels.emplace_back(detail::trim(fields[c]));
        continue;
      }
      double v;
      if (!detail::parse_double(fields[c], v))
        throw std::runtime_error(
            path + " line " + std::to_string(file_line) + ", column " +
            std::to_string(c + 1) + ": '" + std::string(detail::trim(fields[c])) +
            "' is not a number (missing values are not supported)");
      if (!std::isfinite(v))
        throw std::runtime_error(path + " line " + std::to_string(file_line) +
                                 ", column " + std::to_string(c + 1) +
                                 ": non-finite value");
      row[col_out++] = v;
    }
  }
  out.sample = FunctionalSample(std::move(m));
  return out;
}

inline void write_sample_csv(const std::string& path,
                             const FunctionalSample& sample,
                             const RunManifest* manifest = nullptr) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write file: " + path);
  if (manifest) outf << manifest_comment(*manifest) << "\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    auto row = sample.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) outf << ',';
      outf << format_double(row[c]);
    }
    outf << "\n";
  }
  if (!outf) throw std::runtime_error("write failed: " + path);
}

inline nlohmann::json report_json(const TestReport& rep,
                                  const RunManifest& manifest,
                                  const std::string& k_hat_label = {}) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["n"] = rep.n;
  j["d"] = rep.d;
  j["statistic"] = rep.statistic;
  j["raw_max"] = rep.raw_max;
  j["k_hat"] = rep.k_hat;
  if (!k_hat_label.empty()) j["k_hat_label"] = k_hat_label;
  j["alpha"] = rep.alpha;
  j["critical_value"] = rep.critical_value;
  j["p_value"] = rep.p_value;
  j["reject"] = rep.reject;
  j["replicate_count"] = rep.replicates.size();
  j["replicates"] = rep.replicates;
  j["kernel"] = {{"kind", to_string(rep.kernel.kind)},
                 {"weighting", to_string(rep.kernel.weighting)}};
  if (rep.kernel.kind == KernelKind::clipped)
    j["kernel"]["clip_c"] = rep.kernel.clip_c;
  j["bandwidth"] = {{"mode", rep.bandwidth_auto ? "auto" : "fixed"},
                    {"q_used", rep.q_used}};
  if (rep.bandwidth_auto) {
    j["bandwidth"]["q0"] = rep.bandwidth.q0;
    j["bandwidth"]["cp0_sum"] = rep.bandwidth.cp0_sum;
    j["bandwidth"]["cp1_sum"] = rep.bandwidth.cp1_sum;
    j["bandwidth"]["clamped"] = rep.bandwidth.clamped;
  }
  j["conventions"] = {{"lag_convention", to_string(rep.lag_convention)},
                      {"p_value_rule", to_string(rep.p_value_rule)},
                      {"weighting", to_string(rep.kernel.weighting)},
                      {"critical_value",
                       "order statistic at ceil((1-alpha)*m), 1-based"}};
  j["clamped_eigenvalues"] = rep.clamped_eigs;
  j["manifest"] = manifest.to_json();
  return j;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write file: " + path);
  outf << j.dump(2) << "\n";
  if (!outf) throw std::runtime_error("write failed: " + path);
}

// Aggregate table: scenario,kernel,alpha,rejection_rate,mc_stderr.
inline void write_rejection_table_csv(const std::string& path,
                                      const RejectionTable& table,
                                      const RunManifest& manifest) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write file: " + path);
  outf << manifest_comment(manifest) << "\n";
  outf << "scenario,kernel,alpha,rejection_rate,mc_stderr\n";
  for (const auto& row : table.rows)
    outf << row.scenario << ',' << row.kernel << ',' << format_double(row.alpha)
         << ',' << format_double(row.rate) << ','
         << format_double(row.mc_stderr) << "\n";
  if (!outf) throw std::runtime_error("write failed: " + path);
}

// Long format, one row per study x kernel x alpha, for size-power curves.
inline void write_long_csv(const std::string& path, const ScenarioSpec& spec,
                           const RejectionTable& table,
                           const RunManifest& manifest) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw std::runtime_error("cannot write file: " + path);
  outf << manifest_comment(manifest) << "\n";
  outf << "scenario,kernel,alpha,study,statistic,p_value,reject\n";
  for (const auto& oc : table.outcomes)
    for (std::size_t ai = 0; ai < table.alphas.size(); ++ai)
      outf << to_string(spec.id) << ',' << oc.kernel << ','
           << format_double(table.alphas[ai]) << ',' << oc.study << ','
           << format_double(oc.statistic) << ',' << format_double(oc.p_value)
           << ',' << (oc.reject_at[ai] ? 1 : 0) << "\n";
  if (!outf) throw std::runtime_error("write failed: " + path);
}

}  // namespace funcpd
