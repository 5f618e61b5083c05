#include "lot/report.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

namespace lot {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_header() {
  return "kind,K,N,q,t,Nprime,lhs,rhs,margin,pass,reason,resolution,seed";
}

std::string csv_row(const ReportRow& row) {
  std::string out;
  out += row.kind;
  for (double v : {row.K, row.N, row.q, row.t, row.Nprime, row.lhs, row.rhs, row.margin}) {
    out += ',';
    out += format_double(v);
  }
  out += row.pass ? ",1," : ",0,";
  out += row.reason;
  out += ',';
  if (row.resolution) out += std::to_string(*row.resolution);
  out += ',';
  if (row.seed) out += std::to_string(*row.seed);
  return out;
}

namespace {

// NaN fields sort ahead of any number so rows with fewer parameters group first.
double sort_key(double v) {
  return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
}

}  // namespace

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    const auto key = [](const ReportRow& r) {
      return std::make_tuple(r.kind, r.resolution.value_or(-1), sort_key(r.K),
                             sort_key(r.N), sort_key(r.q), sort_key(r.t),
                             sort_key(r.Nprime), r.seed.value_or(0));
    };
    return key(a) < key(b);
  });
}

}  // namespace lot
