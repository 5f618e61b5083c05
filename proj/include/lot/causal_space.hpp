#pragma once

#include <span>
#include <string>
#include <vector>

#include "lot/exec.hpp"
#include "lot/report.hpp"
#include "lot/time_value.hpp"

namespace lot {

enum class CausalRelation { Chronological, NullCausal, Unrelated };

/// A finite causal space: point labels, the dense time-separation matrix
/// (row-major, -inf sentinel for unrelated pairs) and strictly positive
/// reference-measure weights. Values are immutable after construction and all
/// operations on them are pure.
class FiniteCausalSpace {
 public:
  FiniteCausalSpace(int n, std::vector<TimeValue> ell, std::vector<double> ref_mass,
                    std::vector<std::string> labels = {});

  int size() const { return n_; }

  TimeValue ell(int i, int j) const {
    check_index(i);
    check_index(j);
    return ell_[static_cast<std::size_t>(i) * n_ + j];
  }

  double ref_mass(int i) const {
    check_index(i);
    return ref_mass_[static_cast<std::size_t>(i)];
  }

  const std::vector<TimeValue>& ell_matrix() const { return ell_; }
  const std::vector<double>& ref_masses() const { return ref_mass_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Total reference mass of a cell set.
  double mass(std::span<const int> cells) const;

  /// Largest finite entry of ell; scale for default tolerances.
  double ell_scale() const { return ell_scale_; }
  double default_tol() const { return 1e-9 * ell_scale_; }

 private:
  void check_index(int i) const;

  int n_;
  std::vector<TimeValue> ell_;
  std::vector<double> ref_mass_;
  std::vector<std::string> labels_;
  double ell_scale_;
};

CausalRelation causal_relation(const FiniteCausalSpace& space, int i, int j);

/// A finite causal path: point indices with strictly increasing parameter
/// values, params.front() = 0 and params.back() = 1.
struct DiscretePath {
  std::vector<int> points;
  std::vector<double> params;
};

/// Checks consecutive causal relations; by the reverse triangle inequality
/// this implies ell(points[i], points[j]) >= 0 for all i <= j.
bool is_causal(const FiniteCausalSpace& space, const DiscretePath& path);

/// Sum of consecutive separations. On a fixed finite sequence the infimum
/// over sub-partitions is attained at the finest partition, so this is the
/// exact age of the discrete path. Throws NonCausalPathError.
TimeValue age(const FiniteCausalSpace& space, const DiscretePath& path);

/// True iff every sampled segment satisfies
/// |ell(p_a, p_b) - (params_b - params_a) * ell(p_first, p_last)| <= tol.
bool is_geodesic_samples(const FiniteCausalSpace& space, const DiscretePath& path,
                         double tol);

/// J(A,B) = { x : exists a in A, b in B with ell(a,x) >= 0 and ell(x,b) >= 0 }.
/// Returned sorted ascending.
std::vector<int> emerald(const FiniteCausalSpace& space, std::span<const int> A,
                         std::span<const int> B, Exec exec = kDefaultExec);

struct TriangleViolation {
  int i, j, k;
  double lhs;  // ell(i,k)
  double rhs;  // ell(i,j) + ell(j,k)
};

inline constexpr int kTriangleReportCap = 100;

/// Scans all triples for ell(i,k) + tol < ell(i,j) + ell(j,k). The report
/// lists at most `cap` offending triples; the total count goes in the notes.
VerificationReport check_reverse_triangle(const FiniteCausalSpace& space, double tol,
                                          int cap = kTriangleReportCap,
                                          Exec exec = kDefaultExec);

}  // namespace lot
