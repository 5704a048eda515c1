#include "kktdd/time_partition.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <string>

namespace kktdd {

namespace {

void check_subdomain(const TimePartition& part, int s) {
  if (s < 0 || s >= part.nd) {
    throw std::invalid_argument("subdomain id " + std::to_string(s) + " outside 0.." +
                                std::to_string(part.nd - 1));
  }
}

void check_global_length(const SpaceTimeLayout& layout, const SpaceTimeVector& v) {
  if (v.size() != layout.size()) {
    throw std::invalid_argument("space-time vector length " + std::to_string(v.size()) +
                                ", layout expects " + std::to_string(layout.size()));
  }
}

std::vector<double> gather(const SpaceTimeLayout& layout, const NodeRange& range,
                           const SpaceTimeVector& v) {
  const int nsp = layout.n_sp();
  std::vector<double> out(static_cast<std::size_t>(range.count()) * nsp);
  for (int k = 0; k < range.count(); ++k) {
    std::memcpy(out.data() + static_cast<std::size_t>(k) * nsp,
                v.data() + layout.node_offset(range.first + k), sizeof(double) * nsp);
  }
  return out;
}

SpaceTimeVector scatter(const SpaceTimeLayout& layout, const NodeRange& range,
                        const std::vector<double>& sub) {
  const int nsp = layout.n_sp();
  if (sub.size() != static_cast<std::size_t>(range.count()) * nsp) {
    throw std::invalid_argument("subdomain vector length " + std::to_string(sub.size()) +
                                ", range expects " +
                                std::to_string(static_cast<std::size_t>(range.count()) * nsp));
  }
  SpaceTimeVector out = layout.zeros();
  for (int k = 0; k < range.count(); ++k) {
    std::memcpy(out.data() + layout.node_offset(range.first + k),
                sub.data() + static_cast<std::size_t>(k) * nsp, sizeof(double) * nsp);
  }
  return out;
}

}  // namespace

std::vector<int> TimePartition::node_list(int s) const {
  std::vector<int> out(nodes[s].count());
  std::iota(out.begin(), out.end(), nodes[s].first);
  return out;
}

TimePartition build_time_partition(int nt, int nd) {
  if (nt < 1 || nd < 1) {
    throw ConfigError("time partition requires Nt >= 1 and Nd >= 1, got Nt=" +
                      std::to_string(nt) + " Nd=" + std::to_string(nd));
  }
  if (nt % nd != 0) {
    throw ConfigError("Nt=" + std::to_string(nt) + " is not divisible by Nd=" +
                      std::to_string(nd));
  }
  TimePartition part;
  part.nt = nt;
  part.nd = nd;
  part.m = nt / nd;
  part.owner.assign(nt + 1, 0);
  for (int n = 1; n <= nt; ++n) part.owner[n] = (n - 1) / part.m;

  for (int s = 0; s < nd; ++s) {
    const int last = (s + 1) * part.m;
    const int first = (s == 0) ? 1 : s * part.m;  // shared node with s-1
    part.nodes.push_back({first, last});
    part.owned.push_back({s == 0 ? 1 : s * part.m + 1, last});
    const int wfirst = first - 1;
    part.extended.push_back({wfirst >= 1 ? wfirst : first, last});
  }
  return part;
}

std::vector<double> restrict_to_subdomain(const SpaceTimeLayout& layout,
                                          const TimePartition& part, int s,
                                          const SpaceTimeVector& v) {
  check_subdomain(part, s);
  check_global_length(layout, v);
  return gather(layout, part.nodes[s], v);
}

SpaceTimeVector prolong_from_subdomain(const SpaceTimeLayout& layout,
                                       const TimePartition& part, int s,
                                       const std::vector<double>& sub) {
  check_subdomain(part, s);
  return scatter(layout, part.nodes[s], sub);
}

std::vector<double> restrict_to_window(const SpaceTimeLayout& layout,
                                       const TimePartition& part, int s,
                                       const SpaceTimeVector& v) {
  check_subdomain(part, s);
  check_global_length(layout, v);
  return gather(layout, part.extended[s], v);
}

SpaceTimeVector prolong_from_window(const SpaceTimeLayout& layout, const TimePartition& part,
                                    int s, const std::vector<double>& sub) {
  check_subdomain(part, s);
  return scatter(layout, part.extended[s], sub);
}

void apply_ownership_mask(const SpaceTimeLayout& layout, const TimePartition& part, int s,
                          std::vector<double>& sub) {
  check_subdomain(part, s);
  const int nsp = layout.n_sp();
  const NodeRange& range = part.nodes[s];
  if (sub.size() != static_cast<std::size_t>(range.count()) * nsp) {
    throw std::invalid_argument("ownership mask: subdomain vector has wrong length");
  }
  for (int k = 0; k < range.count(); ++k) {
    if (part.owner[range.first + k] != s) {
      std::fill_n(sub.begin() + static_cast<std::size_t>(k) * nsp, nsp, 0.0);
    }
  }
}

}  // namespace kktdd
