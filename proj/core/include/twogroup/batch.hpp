#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twogroup/inference.hpp"
#include "twogroup/welch.hpp"

namespace twogroup {

struct Marker {
  std::string id;
  TwoGroupSample sample;
};

/// Many-marker two-group matrix; all markers share the column layout,
/// hence the group sizes.
struct MarkerDataset {
  std::vector<Marker> markers;
  std::size_t n0 = 0;
  std::size_t n1 = 0;
};

/// Parses the comma-separated marker matrix:
///   id,<label>,<label>,...   with each label 0 or 1
///   <marker id>,<value>,...  one marker per row
/// Labels assign columns to groups; both groups need at least two
/// columns. LF and CRLF line endings are accepted. Throws
/// MalformedHeader, RaggedRow, NonNumericCell or DuplicateId.
MarkerDataset parse_matrix(std::istream& input);

struct MarkerOutcome {
  std::string id;
  std::optional<InferenceResult> proposed;  // absent when the marker failed
  std::optional<WelchResult> welch;
  std::string status;  // "ok" or an error name

  bool ok() const noexcept { return status == "ok"; }
};

struct BatchSummary {
  std::size_t significant_proposed = 0;
  std::size_t significant_welch = 0;
  std::size_t empty_proposed = 0;
  std::size_t failed = 0;
};

struct BatchResult {
  std::vector<MarkerOutcome> markers;  // input order
  BatchSummary summary;
};

/// Runs both methods on every marker. A failing marker (for example a
/// constant group) is reported with its error status and excluded from
/// the summary counts; it never aborts the batch.
BatchResult analyze_all(const MarkerDataset& dataset, double alpha, const FitConfig& fit = {},
                        int threads = 0);

/// Per-marker table with the header
///   id,delta_hat,rmse,ci_lo,ci_hi,empty,significant,welch_delta,
///   welch_lo,welch_hi,welch_significant,status
/// Empty proposed intervals leave ci_lo/ci_hi blank and set empty=1;
/// failed markers leave all numeric fields blank.
void write_results_csv(std::ostream& out, const BatchResult& result);

}  // namespace twogroup
