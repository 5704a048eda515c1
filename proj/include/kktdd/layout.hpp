#pragma once

#include <cstddef>
#include <vector>

#include "kktdd/config.hpp"

namespace kktdd {

/// A space-time field is stored flat: time-major, then row-major in space
/// (j outer, i inner), so each time-node is one contiguous block of n_sp
/// values. Blocks u, z, w of the KKT unknown all share this layout.
using SpaceTimeVector = std::vector<double>;

struct SpaceTimeLayout {
  int nt = 0;       // time-nodes 1..nt
  int nx_int = 0;   // interior points per x row
  int ny_int = 0;   // interior points per y column

  int n_sp() const { return nx_int * ny_int; }
  std::size_t size() const { return static_cast<std::size_t>(nt) * n_sp(); }

  /// Spatial index of interior point (i,j), both 1-based (1..Nx-1, 1..Ny-1).
  int spatial_index(int i, int j) const { return (j - 1) * nx_int + (i - 1); }

  /// Flat index of time-node n (1..nt) and spatial offset p (0..n_sp-1).
  std::size_t index(int n, int p) const {
    return static_cast<std::size_t>(n - 1) * n_sp() + p;
  }
  std::size_t index(int n, int i, int j) const {
    return index(n, spatial_index(i, j));
  }

  /// Offset of the contiguous block for time-node n.
  std::size_t node_offset(int n) const {
    return static_cast<std::size_t>(n - 1) * n_sp();
  }

  SpaceTimeVector zeros() const { return SpaceTimeVector(size(), 0.0); }
};

inline SpaceTimeLayout make_layout(const ProblemConfig& cfg) {
  return SpaceTimeLayout{cfg.Nt, cfg.nx_interior(), cfg.ny_interior()};
}

}  // namespace kktdd
