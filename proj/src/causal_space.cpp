#include "lot/causal_space.hpp"

#include <algorithm>
#include <cmath>

#include "lot/errors.hpp"

namespace lot {

FiniteCausalSpace::FiniteCausalSpace(int n, std::vector<TimeValue> ell,
                                     std::vector<double> ref_mass,
                                     std::vector<std::string> labels)
    : n_(n), ell_(std::move(ell)), ref_mass_(std::move(ref_mass)), labels_(std::move(labels)) {
  if (n_ <= 0) throw Error("FiniteCausalSpace: need at least one point");
  const auto nn = static_cast<std::size_t>(n_);
  if (ell_.size() != nn * nn) throw Error("FiniteCausalSpace: ell must be n x n");
  if (ref_mass_.size() != nn) throw Error("FiniteCausalSpace: ref_mass must have n entries");
  if (!labels_.empty() && labels_.size() != nn)
    throw Error("FiniteCausalSpace: labels must be empty or have n entries");
  for (double m : ref_mass_)
    if (!(m > 0.0) || !std::isfinite(m))
      throw Error("FiniteCausalSpace: reference masses must be strictly positive");
  for (int i = 0; i < n_; ++i)
    if (!ell_[static_cast<std::size_t>(i) * nn + i].related())
      throw Error("FiniteCausalSpace: causal reflexivity requires ell(i,i) >= 0");

  double scale = 0.0;
  for (const TimeValue& v : ell_)
    if (v.related()) scale = std::max(scale, v.value());
  ell_scale_ = scale > 0.0 ? scale : 1.0;
}

void FiniteCausalSpace::check_index(int i) const {
  if (i < 0 || i >= n_) throw IndexError("point index out of range");
}

double FiniteCausalSpace::mass(std::span<const int> cells) const {
  double total = 0.0;
  for (int i : cells) total += ref_mass(i);
  return total;
}

CausalRelation causal_relation(const FiniteCausalSpace& space, int i, int j) {
  const TimeValue v = space.ell(i, j);
  if (!v.related()) return CausalRelation::Unrelated;
  return v.chronological() ? CausalRelation::Chronological : CausalRelation::NullCausal;
}

bool is_causal(const FiniteCausalSpace& space, const DiscretePath& path) {
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
    if (!space.ell(path.points[i], path.points[i + 1]).related()) return false;
  return true;
}

namespace {

void validate_path(const DiscretePath& path) {
  if (path.points.empty()) throw Error("path must contain at least one point");
  if (path.points.size() != path.params.size())
    throw Error("path points and params must have equal length");
  if (path.params.front() != 0.0 || path.params.back() != 1.0)
    throw Error("path params must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < path.params.size(); ++i)
    if (!(path.params[i] < path.params[i + 1]))
      throw Error("path params must be strictly increasing");
}

}  // namespace

TimeValue age(const FiniteCausalSpace& space, const DiscretePath& path) {
  validate_path(path);
  if (!is_causal(space, path)) throw NonCausalPathError("age: path is not causal");
  TimeValue total = TimeValue::finite(0.0);
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i)
    total = total + space.ell(path.points[i], path.points[i + 1]);
  return total;
}

bool is_geodesic_samples(const FiniteCausalSpace& space, const DiscretePath& path,
                         double tol) {
  validate_path(path);
  const std::size_t last = path.points.size() - 1;
  const TimeValue total = space.ell(path.points[0], path.points[last]);
  for (std::size_t a = 0; a <= last; ++a) {
    for (std::size_t b = a; b <= last; ++b) {
      const TimeValue seg = space.ell(path.points[a], path.points[b]);
      const double want = (path.params[b] - path.params[a]) * total.value();
      if (!(std::abs(seg.value() - want) <= tol)) return false;
    }
  }
  return true;
}

namespace {

// Cell sets are validated before any parallel region; exceptions must not
// escape an omp loop.
void validate_cells(const FiniteCausalSpace& space, std::span<const int> cells,
                    const char* what) {
  for (int c : cells)
    if (c < 0 || c >= space.size())
      throw IndexError(std::string(what) + ": cell index out of range");
}

std::vector<int> emerald_scan(const FiniteCausalSpace& space, std::span<const int> A,
                              std::span<const int> B, Exec exec) {
  const int n = space.size();
  std::vector<char> in(static_cast<std::size_t>(n), 0);

  const auto member = [&](int x) -> char {
    bool after_a = false;
    for (int a : A)
      if (space.ell(a, x).related()) {
        after_a = true;
        break;
      }
    if (!after_a) return 0;
    for (int b : B)
      if (space.ell(x, b).related()) return 1;
    return 0;
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int x = 0; x < n; ++x) in[static_cast<std::size_t>(x)] = member(x);
  } else {
    for (int x = 0; x < n; ++x) in[static_cast<std::size_t>(x)] = member(x);
  }

  std::vector<int> out;
  for (int x = 0; x < n; ++x)
    if (in[static_cast<std::size_t>(x)]) out.push_back(x);
  return out;
}

}  // namespace

std::vector<int> emerald(const FiniteCausalSpace& space, std::span<const int> A,
                         std::span<const int> B, Exec exec) {
  if (A.empty() || B.empty()) throw Error("emerald: A and B must be nonempty");
  validate_cells(space, A, "emerald");
  validate_cells(space, B, "emerald");
  return emerald_scan(space, A, B, exec);
}

namespace {

// Per-i violation scan; each slot is filled independently of scheduling, so
// serial and parallel runs produce identical reports.
void triangle_scan_row(const FiniteCausalSpace& space, double tol, int cap, int i,
                       std::vector<TriangleViolation>& out, long& count) {
  const int n = space.size();
  for (int j = 0; j < n; ++j) {
    const TimeValue a = space.ell(i, j);
    if (!a.related()) continue;  // -inf absorbs: no violation possible via j
    for (int k = 0; k < n; ++k) {
      const TimeValue b = space.ell(j, k);
      if (!b.related()) continue;
      const double rhs = a.value() + b.value();
      const double lhs = space.ell(i, k).value();
      if (lhs + tol < rhs) {
        ++count;
        if (static_cast<int>(out.size()) < cap)
          out.push_back(TriangleViolation{i, j, k, lhs, rhs});
      }
    }
  }
}

}  // namespace

VerificationReport check_reverse_triangle(const FiniteCausalSpace& space, double tol,
                                          int cap, Exec exec) {
  if (!(tol >= 0.0)) throw Error("check_reverse_triangle: tol must be >= 0");
  const int n = space.size();
  std::vector<std::vector<TriangleViolation>> found(static_cast<std::size_t>(n));
  std::vector<long> counts(static_cast<std::size_t>(n), 0);

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (int i = 0; i < n; ++i)
      triangle_scan_row(space, tol, cap, i, found[static_cast<std::size_t>(i)],
                        counts[static_cast<std::size_t>(i)]);
  } else {
    for (int i = 0; i < n; ++i)
      triangle_scan_row(space, tol, cap, i, found[static_cast<std::size_t>(i)],
                        counts[static_cast<std::size_t>(i)]);
  }

  long total = 0;
  for (long c : counts) total += c;

  VerificationReport report;
  report.kind = "reverse_triangle";
  report.pass = total == 0;
  int listed = 0;
  for (int i = 0; i < n && listed < cap; ++i) {
    for (const TriangleViolation& v : found[static_cast<std::size_t>(i)]) {
      if (listed >= cap) break;
      ReportRow row;
      row.kind = "reverse_triangle";
      row.lhs = v.lhs;
      row.rhs = v.rhs;
      row.margin = v.lhs - v.rhs;
      row.pass = false;
      row.reason = "triple " + std::to_string(v.i) + "," + std::to_string(v.j) + "," +
                   std::to_string(v.k);
      report.add(row);
      ++listed;
    }
  }
  report.notes.push_back("violations=" + std::to_string(total) +
                         (total > listed ? " (listing capped at " + std::to_string(cap) + ")"
                                         : ""));
  if (total == 0) {
    ReportRow row;
    row.kind = "reverse_triangle";
    row.pass = true;
    report.add(row);
  }
  return report;
}

}  // namespace lot
