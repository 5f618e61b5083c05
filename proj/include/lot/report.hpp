#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lot {

/// One verified inequality instance. Parameter fields that do not apply to a
/// given condition are NaN and render as empty CSV cells.
struct ReportRow {
  std::string kind;
  double K = NAN;
  double N = NAN;
  double q = NAN;
  double t = NAN;
  double Nprime = NAN;
  double lhs = NAN;
  double rhs = NAN;
  double margin = NAN;  // positive when the inequality holds with slack
  bool pass = false;
  std::string reason;  // empty on pass; e.g. "DomainBlowup", "violation"
  std::optional<int> resolution;
  std::optional<std::uint64_t> seed;
};

/// Per-condition verification record: overall verdict plus one row per grid
/// point, and free-form notes (violating triples, witnesses, calibrations).
struct VerificationReport {
  std::string kind;
  bool pass = true;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;

  void add(ReportRow row) {
    pass = pass && row.pass;
    rows.push_back(std::move(row));
  }

  void merge(const VerificationReport& other) {
    pass = pass && other.pass;
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }
};

/// Fixed CSV schema shared by the CLI and the report files.
std::string csv_header();
std::string csv_row(const ReportRow& row);

/// Deterministic row order: (kind, resolution, K, N, q, t, Nprime).
void sort_rows(std::vector<ReportRow>& rows);

/// "%.12g" rendering used everywhere a double becomes text, so identical
/// inputs produce byte-identical reports.
std::string format_double(double v);

}  // namespace lot
