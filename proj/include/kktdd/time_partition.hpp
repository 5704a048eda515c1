#pragma once

#include <optional>
#include <vector>

#include "kktdd/layout.hpp"

namespace kktdd {

/// Contiguous, inclusive range of time-nodes [first, last].
struct NodeRange {
  int first = 0;
  int last = -1;
  int count() const { return last - first + 1; }
  bool contains(int n) const { return n >= first && n <= last; }
};

/// Decomposition of time-nodes 1..Nt into Nd subdomains of m = Nt/Nd steps.
/// Consecutive subdomains share exactly one node (overlapping nodes,
/// non-overlapping steps); a shared node is owned by the earlier subdomain.
/// The extended window of a subdomain adds the node one step earlier when
/// that node exists (subdomain 0 starts at node 1, whose predecessor is the
/// eliminated initial condition, so its window equals its node set).
///
/// Immutable after construction; subdomain ids are 0-based throughout.
struct TimePartition {
  int nt = 0;
  int nd = 0;
  int m = 0;  // time steps per subdomain

  std::vector<NodeRange> nodes;     // node set per subdomain (N_s = count)
  std::vector<NodeRange> owned;     // nodes after the ownership mask
  std::vector<NodeRange> extended;  // window used by the windowed solves
  std::vector<int> owner;           // owner[n] for n = 1..nt (entry 0 unused)

  /// The extra window node, when present (absent for subdomain 0).
  std::optional<int> w_node(int s) const {
    return extended[s].first < nodes[s].first ? std::optional<int>(extended[s].first)
                                              : std::nullopt;
  }
  std::vector<int> node_list(int s) const;
};

TimePartition build_time_partition(int nt, int nd);

// Boolean gather/scatter between the global space-time layout and a
// subdomain's node set or extended window. Prolongations write zeros on all
// nodes outside the range.
std::vector<double> restrict_to_subdomain(const SpaceTimeLayout& layout,
                                          const TimePartition& part, int s,
                                          const SpaceTimeVector& v);
SpaceTimeVector prolong_from_subdomain(const SpaceTimeLayout& layout,
                                       const TimePartition& part, int s,
                                       const std::vector<double>& sub);
std::vector<double> restrict_to_window(const SpaceTimeLayout& layout,
                                       const TimePartition& part, int s,
                                       const SpaceTimeVector& v);
SpaceTimeVector prolong_from_window(const SpaceTimeLayout& layout,
                                    const TimePartition& part, int s,
                                    const std::vector<double>& sub);

/// Zeroes the entries of a subdomain vector (node-set shape) on nodes not
/// owned by s; the D_s mask.
void apply_ownership_mask(const SpaceTimeLayout& layout, const TimePartition& part, int s,
                          std::vector<double>& sub);

}  // namespace kktdd
