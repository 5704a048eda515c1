#include "kktdd/schur.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <string>

namespace kktdd {

namespace {

constexpr int kDenseOracleLimit = 4096;

void check_dense_scale(int n, const char* what) {
  if (n > kDenseOracleLimit) {
    throw ConfigError(std::string(what) + " is a desk-scale dense variant (size " +
                      std::to_string(n) + " exceeds limit " +
                      std::to_string(kDenseOracleLimit) + ")");
  }
}

void check_adjoint_block(const HeatOperators& ops, std::span<const double> r) {
  if (r.size() != ops.layout.size()) {
    throw std::invalid_argument("schur apply: vector length " + std::to_string(r.size()) +
                                ", layout expects " + std::to_string(ops.layout.size()));
  }
}

/// Dense principal submatrix of M on the contiguous index range [lo, lo+len).
DenseMatrix principal_submatrix(const DenseMatrix& M, std::size_t lo, int len) {
  DenseMatrix out = DenseMatrix::zero(len, len);
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j) out.at(i, j) = M.at(static_cast<int>(lo) + i,
                                                      static_cast<int>(lo) + j);
  return out;
}

/// Dense block lower bidiagonal Jhat on a window of `len` time-nodes.
DenseMatrix dense_window_jhat(const HeatOperators& ops, int len) {
  const int nsp = ops.layout.n_sp();
  DenseMatrix out = DenseMatrix::zero(len * nsp, len * nsp);
  for (int k = 0; k < len; ++k) {
    for (int i = 0; i < nsp; ++i) {
      for (int j = 0; j < nsp; ++j) {
        const double v = ops.Ahat.at(i, j);
        if (v != 0.0) out.at(k * nsp + i, k * nsp + j) = v;
      }
      if (k > 0) out.at(k * nsp + i, (k - 1) * nsp + i) = -1.0;
    }
  }
  return out;
}

}  // namespace

DenseMatrix dense_from_operator(
    int n, const std::function<void(std::span<const double>, std::span<double>)>& apply) {
  check_dense_scale(n, "dense_from_operator");
  DenseMatrix M = DenseMatrix::zero(n, n);
  std::vector<double> e(n, 0.0), col(n, 0.0);
  for (int j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    apply(e, col);
    for (int i = 0; i < n; ++i) M.at(i, j) = col[i];
  }
  return M;
}

void apply_shat(const HeatOperators& ops, std::span<const double> v, std::span<double> out) {
  check_adjoint_block(ops, v);
  check_adjoint_block(ops, out);
  std::vector<double> t(v.size());
  apply_JhatT(ops, v, t);
  for (double& x : t) x /= ops.mass_scale;
  apply_Jhat(ops, t, out);
}

DenseMatrix assemble_dense_shat(const HeatOperators& ops) {
  const int n = static_cast<int>(ops.layout.size());
  check_dense_scale(n, "assemble_dense_shat");
  return dense_from_operator(
      n, [&](std::span<const double> v, std::span<double> out) { apply_shat(ops, v, out); });
}

DenseMatrix assemble_dense_true_schur(const HeatOperators& ops) {
  const int n = static_cast<int>(ops.layout.size());
  check_dense_scale(n, "assemble_dense_true_schur");
  return dense_from_operator(n, [&](std::span<const double> v, std::span<double> out) {
    std::vector<double> t(v.size()), s(v.size());
    apply_JT(ops, v, t);
    for (double& x : t) x /= ops.mass_scale;
    apply_J(ops, t, out);
    apply_LT(ops, v, t);
    for (double& x : t) x /= ops.mass_scale;
    apply_L(ops, t, s);
    const double inv_omega = 1.0 / ops.config.omega;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += inv_omega * s[k];
  });
}

SpaceTimeVector apply_rasq(const HeatOperators& ops, const TimePartition& part,
                           const SpaceTimeVector& r) {
  check_adjoint_block(ops, r);
  const auto& layout = ops.layout;
  const int nsp = layout.n_sp();
  SpaceTimeVector out = layout.zeros();
  for (int s = 0; s < part.nd; ++s) {
    // R_s r, scattered into the extended window with zero on the extra node.
    std::vector<double> sub = restrict_to_subdomain(layout, part, s, r);
    const int wlen = part.extended[s].count();
    const int off = part.nodes[s].first - part.extended[s].first;
    std::vector<double> win(static_cast<std::size_t>(wlen) * nsp, 0.0);
    std::memcpy(win.data() + static_cast<std::size_t>(off) * nsp, sub.data(),
                sizeof(double) * sub.size());

    forward_solve_window(ops, win);
    for (double& x : win) x *= ops.mass_scale;
    adjoint_solve_window(ops, win);

    // Drop the extra node, mask to owned nodes, scatter-add.
    std::memcpy(sub.data(), win.data() + static_cast<std::size_t>(off) * nsp,
                sizeof(double) * sub.size());
    apply_ownership_mask(layout, part, s, sub);
    const std::size_t base = layout.node_offset(part.nodes[s].first);
    for (std::size_t k = 0; k < sub.size(); ++k) out[base + k] += sub[k];
  }
  return out;
}

double verify_subdomain_identity(const HeatOperators& ops, const TimePartition& part, int s) {
  const auto& layout = ops.layout;
  const int nsp = layout.n_sp();
  const DenseMatrix shat = assemble_dense_shat(ops);
  const int ns = part.nodes[s].count();
  const DenseMatrix lhs =
      principal_submatrix(shat, layout.node_offset(part.nodes[s].first), ns * nsp);

  const int wlen = part.extended[s].count();
  const DenseMatrix jhat_s = dense_window_jhat(ops, wlen);
  // Jhat_s M_s^{-1} Jhat_s^T on the window.
  DenseMatrix prod = DenseMatrix::zero(wlen * nsp, wlen * nsp);
  for (int i = 0; i < prod.rows; ++i) {
    for (int j = 0; j < prod.cols; ++j) {
      double acc = 0.0;
      for (int k = 0; k < prod.rows; ++k) acc += jhat_s.at(i, k) * jhat_s.at(j, k);
      prod.at(i, j) = acc / ops.mass_scale;
    }
  }
  const int off = (part.nodes[s].first - part.extended[s].first) * nsp;
  double max_diff = 0.0;
  for (int i = 0; i < ns * nsp; ++i) {
    for (int j = 0; j < ns * nsp; ++j) {
      max_diff = std::max(max_diff, std::abs(lhs.at(i, j) - prod.at(off + i, off + j)));
    }
  }
  return max_diff;
}

// ---------------------------------------------------------------------------
// Coarse space
// ---------------------------------------------------------------------------

namespace {

std::vector<double> linear_profile(int ns) {
  std::vector<double> phi(ns, 0.0);
  if (ns > 1) {
    for (int k = 0; k < ns; ++k) phi[k] = -1.0 + 2.0 * k / (ns - 1);
  }
  return phi;
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

void CoarseSpace::restrict_to_coarse(const SpaceTimeLayout& layout, const TimePartition& part,
                                     std::span<const double> r, std::span<double> c) const {
  if (c.size() != columns_.size()) {
    throw std::invalid_argument("coarse restrict: wrong coarse dimension");
  }
  const int nsp = layout.n_sp();
  for (std::size_t ci = 0; ci < columns_.size(); ++ci) {
    const Column& col = columns_[ci];
    const auto& phi = col.kind == 0 ? phi_const_[col.s] : phi_lin_[col.s];
    const NodeRange owned = part.owned[col.s];
    double acc = 0.0;
    for (int k = 0; k < owned.count(); ++k) {
      const std::size_t base = layout.node_offset(owned.first + k);
      if (col.dof < 0) {
        double node_sum = 0.0;
        for (int p = 0; p < nsp; ++p) node_sum += r[base + p];
        acc += phi[k] * node_sum;
      } else {
        acc += phi[k] * r[base + col.dof];
      }
    }
    c[ci] = acc;
  }
}

void CoarseSpace::prolong_add(const SpaceTimeLayout& layout, const TimePartition& part,
                              std::span<const double> c, std::span<double> out) const {
  if (c.size() != columns_.size()) {
    throw std::invalid_argument("coarse prolong: wrong coarse dimension");
  }
  const int nsp = layout.n_sp();
  for (std::size_t ci = 0; ci < columns_.size(); ++ci) {
    const Column& col = columns_[ci];
    const auto& phi = col.kind == 0 ? phi_const_[col.s] : phi_lin_[col.s];
    const NodeRange owned = part.owned[col.s];
    for (int k = 0; k < owned.count(); ++k) {
      const std::size_t base = layout.node_offset(owned.first + k);
      const double v = phi[k] * c[ci];
      if (col.dof < 0) {
        for (int p = 0; p < nsp; ++p) out[base + p] += v;
      } else {
        out[base + col.dof] += v;
      }
    }
  }
}

void CoarseSpace::solve_in_place(std::span<double> c) const {
  if (s0_dense_lu_) {
    s0_dense_lu_->solve_in_place(c);
  } else {
    s0_sparse_lu_->solve_in_place(c);
  }
}

SpaceTimeVector CoarseSpace::column_vector(const SpaceTimeLayout& layout,
                                           const TimePartition& part, int c) const {
  const Column& col = columns_.at(c);
  const auto& phi = col.kind == 0 ? phi_const_[col.s] : phi_lin_[col.s];
  const NodeRange owned = part.owned[col.s];
  SpaceTimeVector z = layout.zeros();
  for (int k = 0; k < owned.count(); ++k) {
    const std::size_t base = layout.node_offset(owned.first + k);
    if (col.dof < 0) {
      for (int p = 0; p < layout.n_sp(); ++p) z[base + p] = phi[k];
    } else {
      z[base + col.dof] = phi[k];
    }
  }
  return z;
}

DenseMatrix CoarseSpace::coarse_matrix_dense() const {
  if (s0_dense_) return *s0_dense_;
  check_dense_scale(dim(), "coarse_matrix_dense");
  DenseMatrix out = DenseMatrix::zero(dim(), dim());
  const SparseMatrix& S = *s0_sparse_;
  for (int i = 0; i < S.rows; ++i) {
    for (std::size_t k = S.row_offsets[i]; k < S.row_offsets[i + 1]; ++k) {
      out.at(i, S.col_indices[k]) = S.values[k];
    }
  }
  return out;
}

CoarseSpace build_coarse_space(const HeatOperators& ops, const TimePartition& part,
                               CoarseVariant variant) {
  const auto& layout = ops.layout;
  const int nsp = layout.n_sp();
  CoarseSpace cs;
  cs.variant_ = variant;

  // Masked profiles: full profiles over node sets, kept on owned nodes only.
  for (int s = 0; s < part.nd; ++s) {
    const int ns = part.nodes[s].count();
    const int skip = part.owned[s].first - part.nodes[s].first;
    const std::vector<double> lin = linear_profile(ns);
    cs.phi_const_.emplace_back(ns - skip, 1.0);
    cs.phi_lin_.emplace_back(lin.begin() + skip, lin.end());
  }

  // Column bookkeeping: (subdomain, profile kind[, spatial dof]).
  std::vector<std::array<int, 2>> col_start(part.nd, {-1, -1});
  for (int s = 0; s < part.nd; ++s) {
    for (int kind = 0; kind < 2; ++kind) {
      const auto& phi = kind == 0 ? cs.phi_const_[s] : cs.phi_lin_[s];
      if (all_zero(phi)) continue;  // linear profile degenerates for N_s = 1
      // A single owned node supports one profile only; the masked ramp would
      // duplicate the constant column and S0 would lose rank.
      if (kind == 1 && part.owned[s].count() < 2) continue;
      col_start[s][kind] = static_cast<int>(cs.columns_.size());
      if (variant == CoarseVariant::scalar) {
        cs.columns_.push_back({s, kind, -1});
      } else {
        for (int p = 0; p < nsp; ++p) cs.columns_.push_back({s, kind, p});
      }
    }
  }
  const int dim = cs.dim();
  if (dim == 0) throw ConfigError("coarse space is empty");

  std::optional<DenseMatrix> s0_dense;
  std::vector<std::tuple<int, int, double>> triplets;
  if (variant == CoarseVariant::scalar) s0_dense = DenseMatrix::zero(dim, dim);

  // Galerkin rows S0[*, c] = Z^T (Jhat M^{-1} Jhat^T Z e_c), computed on the
  // support window of column c: owned nodes extended by one node either side.
  std::vector<double> zwin, twin, ywin, node_sums;
  for (int s = 0; s < part.nd; ++s) {
    const NodeRange owned = part.owned[s];
    const int e0 = std::max(1, owned.first - 1);
    const int e1 = std::min(layout.nt, owned.last + 1);
    const int wlen = e1 - e0 + 1;
    const int off = owned.first - e0;
    for (int kind = 0; kind < 2; ++kind) {
      if (col_start[s][kind] < 0) continue;
      const auto& phi = kind == 0 ? cs.phi_const_[s] : cs.phi_lin_[s];
      const int ndof = variant == CoarseVariant::scalar ? 1 : nsp;
      for (int dof = 0; dof < ndof; ++dof) {
        const int ci = col_start[s][kind] + (variant == CoarseVariant::scalar ? 0 : dof);
        zwin.assign(static_cast<std::size_t>(wlen) * nsp, 0.0);
        for (int k = 0; k < owned.count(); ++k) {
          double* node = zwin.data() + static_cast<std::size_t>(off + k) * nsp;
          if (variant == CoarseVariant::scalar) {
            for (int p = 0; p < nsp; ++p) node[p] = phi[k];
          } else {
            node[dof] = phi[k];
          }
        }
        // t = Jhat^T z, scaled by M^{-1}; y = Jhat t. The window covers the
        // full support of both, so buffer-edge zeros match the global
        // operators.
        twin.assign(zwin.size(), 0.0);
        for (int k = 0; k < wlen; ++k) {
          auto tk = std::span<double>(twin).subspan(static_cast<std::size_t>(k) * nsp, nsp);
          band_matvec_transpose(ops.Ahat,
                                std::span<const double>(zwin).subspan(
                                    static_cast<std::size_t>(k) * nsp, nsp),
                                tk);
          if (k + 1 < wlen) {
            const double* znext = zwin.data() + static_cast<std::size_t>(k + 1) * nsp;
            for (int p = 0; p < nsp; ++p) tk[p] -= znext[p];
          }
        }
        for (double& x : twin) x /= ops.mass_scale;
        ywin.assign(zwin.size(), 0.0);
        for (int k = 0; k < wlen; ++k) {
          auto yk = std::span<double>(ywin).subspan(static_cast<std::size_t>(k) * nsp, nsp);
          band_matvec(ops.Ahat,
                      std::span<const double>(twin).subspan(static_cast<std::size_t>(k) * nsp,
                                                            nsp),
                      yk);
          if (k > 0) {
            const double* tprev = twin.data() + static_cast<std::size_t>(k - 1) * nsp;
            for (int p = 0; p < nsp; ++p) yk[p] -= tprev[p];
          }
        }
        if (variant == CoarseVariant::scalar) {
          node_sums.assign(wlen, 0.0);
          for (int k = 0; k < wlen; ++k) {
            double acc = 0.0;
            for (int p = 0; p < nsp; ++p) acc += ywin[static_cast<std::size_t>(k) * nsp + p];
            node_sums[k] = acc;
          }
        }
        // Inner products with all columns whose support meets the window
        // (neighbouring subdomains only).
        for (int s2 = std::max(0, s - 1); s2 <= std::min(part.nd - 1, s + 1); ++s2) {
          const NodeRange owned2 = part.owned[s2];
          for (int kind2 = 0; kind2 < 2; ++kind2) {
            if (col_start[s2][kind2] < 0) continue;
            const auto& phi2 = kind2 == 0 ? cs.phi_const_[s2] : cs.phi_lin_[s2];
            const int ndof2 = variant == CoarseVariant::scalar ? 1 : nsp;
            for (int dof2 = 0; dof2 < ndof2; ++dof2) {
              const int ri =
                  col_start[s2][kind2] + (variant == CoarseVariant::scalar ? 0 : dof2);
              double acc = 0.0;
              for (int k2 = 0; k2 < owned2.count(); ++k2) {
                const int n2 = owned2.first + k2;
                if (n2 < e0 || n2 > e1) continue;
                const int pos = n2 - e0;
                if (variant == CoarseVariant::scalar) {
                  acc += phi2[k2] * node_sums[pos];
                } else {
                  acc += phi2[k2] * ywin[static_cast<std::size_t>(pos) * nsp + dof2];
                }
              }
              if (variant == CoarseVariant::scalar) {
                s0_dense->at(ri, ci) = acc;
              } else if (acc != 0.0) {
                triplets.emplace_back(ri, ci, acc);
              }
            }
          }
        }
      }
    }
  }

  try {
    if (variant == CoarseVariant::scalar) {
      cs.s0_dense_ = std::move(*s0_dense);
      cs.s0_dense_lu_.emplace(*cs.s0_dense_);
    } else {
      cs.s0_sparse_ = sparse_from_triplets(dim, dim, std::move(triplets));
      cs.s0_sparse_lu_.emplace(*cs.s0_sparse_);
    }
  } catch (const SingularMatrixError& e) {
    throw ConfigError("coarse operator (" + to_string(variant) +
                      " variant) is rank deficient: " + e.what());
  }
  return cs;
}

SpaceTimeVector apply_two_level(const HeatOperators& ops, const TimePartition& part,
                                const CoarseSpace& coarse, const SpaceTimeVector& r,
                                TwoLevelForm form) {
  check_adjoint_block(ops, r);
  const auto& layout = ops.layout;
  std::vector<double> c(coarse.dim(), 0.0);
  coarse.restrict_to_coarse(layout, part, r, c);
  coarse.solve_in_place(c);
  SpaceTimeVector yc = layout.zeros();
  coarse.prolong_add(layout, part, c, yc);

  switch (form) {
    case TwoLevelForm::literal:
      return apply_rasq(ops, part, yc);
    case TwoLevelForm::additive: {
      SpaceTimeVector out = apply_rasq(ops, part, r);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += yc[k];
      return out;
    }
    case TwoLevelForm::multiplicative: {
      SpaceTimeVector residual(layout.size());
      apply_shat(ops, yc, residual);
      for (std::size_t k = 0; k < residual.size(); ++k) residual[k] = r[k] - residual[k];
      SpaceTimeVector out = apply_rasq(ops, part, residual);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += yc[k];
      return out;
    }
  }
  throw std::logic_error("unreachable two-level form");
}

// ---------------------------------------------------------------------------
// SchurSolver
// ---------------------------------------------------------------------------

SchurSolver SchurSolver::make_identity(const HeatOperators& ops) {
  return SchurSolver(Kind::identity, ops);
}

SchurSolver SchurSolver::make_one_level(const HeatOperators& ops, const TimePartition& part) {
  SchurSolver s(Kind::one_level, ops);
  s.part_ = &part;
  return s;
}

SchurSolver SchurSolver::make_two_level(const HeatOperators& ops, const TimePartition& part,
                                        CoarseVariant variant, TwoLevelForm form) {
  SchurSolver s(Kind::two_level, ops);
  s.part_ = &part;
  s.coarse_ = build_coarse_space(ops, part, variant);
  s.form_ = form;
  return s;
}

SchurSolver SchurSolver::make_dense_shat(const HeatOperators& ops) {
  SchurSolver s(Kind::dense_shat, ops);
  s.dense_lu_.emplace(assemble_dense_shat(ops));
  return s;
}

SchurSolver SchurSolver::make_dense_true(const HeatOperators& ops) {
  SchurSolver s(Kind::dense_true, ops);
  s.dense_lu_.emplace(assemble_dense_true_schur(ops));
  return s;
}

SchurSolver SchurSolver::make_dense_ras(const HeatOperators& ops, const TimePartition& part) {
  SchurSolver s(Kind::dense_ras, ops);
  s.part_ = &part;
  const DenseMatrix shat = assemble_dense_shat(ops);
  const int nsp = ops.layout.n_sp();
  for (int sd = 0; sd < part.nd; ++sd) {
    const DenseMatrix block = principal_submatrix(
        shat, ops.layout.node_offset(part.nodes[sd].first), part.nodes[sd].count() * nsp);
    s.subdomain_lu_.emplace_back(block);
  }
  return s;
}

void SchurSolver::apply(std::span<const double> r, std::span<double> out) const {
  check_adjoint_block(*ops_, r);
  check_adjoint_block(*ops_, out);
  switch (kind_) {
    case Kind::identity:
      std::copy(r.begin(), r.end(), out.begin());
      return;
    case Kind::one_level: {
      SpaceTimeVector res = apply_rasq(*ops_, *part_, SpaceTimeVector(r.begin(), r.end()));
      std::copy(res.begin(), res.end(), out.begin());
      return;
    }
    case Kind::two_level: {
      SpaceTimeVector res = apply_two_level(*ops_, *part_, *coarse_,
                                            SpaceTimeVector(r.begin(), r.end()), form_);
      std::copy(res.begin(), res.end(), out.begin());
      return;
    }
    case Kind::dense_shat:
    case Kind::dense_true: {
      std::copy(r.begin(), r.end(), out.begin());
      dense_lu_->solve_in_place(out);
      return;
    }
    case Kind::dense_ras: {
      const auto& layout = ops_->layout;
      std::fill(out.begin(), out.end(), 0.0);
      const SpaceTimeVector rv(r.begin(), r.end());
      for (int sd = 0; sd < part_->nd; ++sd) {
        std::vector<double> sub = restrict_to_subdomain(layout, *part_, sd, rv);
        subdomain_lu_[sd].solve_in_place(sub);
        apply_ownership_mask(layout, *part_, sd, sub);
        const std::size_t base = layout.node_offset(part_->nodes[sd].first);
        for (std::size_t k = 0; k < sub.size(); ++k) out[base + k] += sub[k];
      }
      return;
    }
  }
  throw std::logic_error("unreachable schur kind");
}

SpaceTimeVector dense_ras_apply(const HeatOperators& ops, const TimePartition& part,
                                const SpaceTimeVector& r) {
  const SchurSolver solver = SchurSolver::make_dense_ras(ops, part);
  SpaceTimeVector out(r.size());
  solver.apply(r, out);
  return out;
}

SchurSolver make_schur_solver(const HeatOperators& ops, const TimePartition& part,
                              const ProblemConfig& cfg) {
  switch (cfg.precond) {
    case PrecondKind::none:
      return SchurSolver::make_identity(ops);
    case PrecondKind::one_level:
      return SchurSolver::make_one_level(ops, part);
    case PrecondKind::two_level:
      return SchurSolver::make_two_level(ops, part, cfg.coarse_variant, cfg.two_level_form);
    case PrecondKind::dense_schur:
      return SchurSolver::make_dense_shat(ops);
    case PrecondKind::true_schur:
      return SchurSolver::make_dense_true(ops);
  }
  throw std::logic_error("unreachable preconditioner kind");
}

}  // namespace kktdd
