#include "twogroup/batch.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_set>

#include "twogroup/format.hpp"
#include "twogroup/parallel.hpp"

namespace twogroup {
namespace {

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

double parse_cell(std::string_view cell, std::size_t line_no, std::size_t column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    fail(errc::non_numeric_cell, "line " + std::to_string(line_no) + ", column " +
                                     std::to_string(column + 1) + ": cannot parse '" +
                                     std::string(cell) + "' as a number");
  }
  return value;
}

// Returns false at end of input; strips CRLF endings and a UTF-8 BOM
// on the first line.
bool next_line(std::istream& input, std::string& line, bool first) {
  if (!std::getline(input, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (first && line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF') {
    line.erase(0, 3);
  }
  return true;
}

}  // namespace

MarkerDataset parse_matrix(std::istream& input) {
  std::string line;
  if (!next_line(input, line, true)) {
    fail(errc::malformed_header, "input is empty, expected an 'id,<label>,...' header");
  }
  const std::vector<std::string_view> header = split_csv(line);
  if (header.empty() || header[0] != "id") {
    fail(errc::malformed_header, "first header column must be 'id'");
  }

  // Column k of a data row belongs to the group its header label names.
  std::vector<int> labels;
  labels.reserve(header.size() - 1);
  MarkerDataset dataset;
  for (std::size_t k = 1; k < header.size(); ++k) {
    if (header[k] == "0") {
      labels.push_back(0);
      ++dataset.n0;
    } else if (header[k] == "1") {
      labels.push_back(1);
      ++dataset.n1;
    } else {
      fail(errc::malformed_header, "header column " + std::to_string(k + 1) + " is '" +
                                       std::string(header[k]) + "', expected label 0 or 1");
    }
  }
  if (dataset.n0 < 2 || dataset.n1 < 2) {
    fail(errc::malformed_header, "need at least two columns per group, got " +
                                     std::to_string(dataset.n0) + " and " +
                                     std::to_string(dataset.n1));
  }

  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (next_line(input, line, false)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string_view> cells = split_csv(line);
    if (cells.size() != header.size()) {
      fail(errc::ragged_row, "line " + std::to_string(line_no) + " has " +
                                 std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(header.size()));
    }
    Marker marker;
    marker.id = std::string(cells[0]);
    if (!seen.insert(marker.id).second) {
      fail(errc::duplicate_id, "marker id '" + marker.id + "' appears more than once");
    }
    marker.sample.y0.reserve(dataset.n0);
    marker.sample.y1.reserve(dataset.n1);
    for (std::size_t k = 1; k < cells.size(); ++k) {
      const double value = parse_cell(cells[k], line_no, k);
      if (labels[k - 1] == 0) {
        marker.sample.y0.push_back(value);
      } else {
        marker.sample.y1.push_back(value);
      }
    }
    dataset.markers.push_back(std::move(marker));
  }
  return dataset;
}

BatchResult analyze_all(const MarkerDataset& dataset, double alpha, const FitConfig& fit,
                        int threads) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::invalid_params, "alpha must lie in (0, 1)");
  BatchResult result;
  result.markers.resize(dataset.markers.size());

  InferenceConfig config;
  config.alpha = alpha;
  config.fit = fit;

  parallel_for(dataset.markers.size(), threads, [&](std::size_t i) {
    const Marker& marker = dataset.markers[i];
    MarkerOutcome& out = result.markers[i];
    out.id = marker.id;
    try {
      out.proposed = infer(marker.sample, config);
      out.welch = welch_infer(marker.sample, alpha);
      out.status = "ok";
    } catch (const Error& e) {
      out.proposed.reset();
      out.welch.reset();
      out.status = errc_name(e.code());
    }
  });

  for (const MarkerOutcome& m : result.markers) {
    if (!m.ok()) {
      ++result.summary.failed;
      continue;
    }
    if (m.proposed->significant) ++result.summary.significant_proposed;
    if (m.proposed->interval.empty()) ++result.summary.empty_proposed;
    if (m.welch->significant) ++result.summary.significant_welch;
  }
  return result;
}

void write_results_csv(std::ostream& out, const BatchResult& result) {
  out << "id,delta_hat,rmse,ci_lo,ci_hi,empty,significant,"
         "welch_delta,welch_lo,welch_hi,welch_significant,status\n";
  for (const MarkerOutcome& m : result.markers) {
    out << m.id << ',';
    if (m.ok()) {
      const InferenceResult& p = *m.proposed;
      out << format_g17(p.delta_hat) << ',' << format_g17(p.rmse) << ',';
      if (p.interval.empty()) {
        out << ",,1,";
      } else {
        out << format_g17(p.interval.lo()) << ',' << format_g17(p.interval.hi()) << ",0,";
      }
      out << (p.significant ? '1' : '0') << ',';
      const WelchResult& w = *m.welch;
      out << format_g17(w.delta_hat) << ',' << format_g17(w.interval.lo()) << ','
          << format_g17(w.interval.hi()) << ',' << (w.significant ? '1' : '0') << ',';
    } else {
      out << ",,,,,,,,,,";
    }
    out << m.status << '\n';
  }
}

}  // namespace twogroup
