#include "kktdd/config.hpp"

namespace kktdd {

void ProblemConfig::validate() const {
  if (Nx < 2 || Ny < 2) {
    throw ConfigError("mesh needs Nx, Ny >= 2, got Nx=" + std::to_string(Nx) +
                      " Ny=" + std::to_string(Ny));
  }
  if (Lx <= 0 || Ly <= 0 || T <= 0) throw ConfigError("domain extents and T must be positive");
  if (Nt < 1) throw ConfigError("Nt must be >= 1, got " + std::to_string(Nt));
  if (Nd < 1) throw ConfigError("Nd must be >= 1, got " + std::to_string(Nd));
  if (Nt % Nd != 0) {
    throw ConfigError("Nt=" + std::to_string(Nt) + " is not divisible by Nd=" +
                      std::to_string(Nd));
  }
  if (nu < 0) throw ConfigError("conductivity nu must be >= 0");
  if (!(omega > 0)) throw ConfigError("regularization omega must be > 0");
  if (!(gmres.tol > 0)) throw ConfigError("gmres tol must be > 0");
  if (gmres.max_iters < 1) throw ConfigError("gmres max_iters must be >= 1");
  if (gmres.restart && *gmres.restart < 1) throw ConfigError("gmres restart must be >= 1");
}

std::string to_string(PrecondKind k) {
  switch (k) {
    case PrecondKind::none: return "none";
    case PrecondKind::one_level: return "one-level";
    case PrecondKind::two_level: return "two-level";
    case PrecondKind::dense_schur: return "dense-schur";
    case PrecondKind::true_schur: return "true-schur";
  }
  return "?";
}

std::string to_string(CoarseVariant v) {
  return v == CoarseVariant::scalar ? "scalar" : "per-dof";
}

std::string to_string(TwoLevelForm f) {
  switch (f) {
    case TwoLevelForm::literal: return "literal";
    case TwoLevelForm::multiplicative: return "multiplicative";
    case TwoLevelForm::additive: return "additive";
  }
  return "?";
}

std::string to_string(JhatSign s) { return s == JhatSign::plus ? "plus" : "minus"; }

PrecondKind precond_from_string(const std::string& s) {
  if (s == "none") return PrecondKind::none;
  if (s == "one-level") return PrecondKind::one_level;
  if (s == "two-level") return PrecondKind::two_level;
  if (s == "dense-schur") return PrecondKind::dense_schur;
  if (s == "true-schur") return PrecondKind::true_schur;
  throw ConfigError("unknown preconditioner kind '" + s + "'");
}

CoarseVariant coarse_variant_from_string(const std::string& s) {
  if (s == "scalar") return CoarseVariant::scalar;
  if (s == "per-dof") return CoarseVariant::per_dof;
  throw ConfigError("unknown coarse variant '" + s + "'");
}

TwoLevelForm two_level_form_from_string(const std::string& s) {
  if (s == "literal") return TwoLevelForm::literal;
  if (s == "multiplicative") return TwoLevelForm::multiplicative;
  if (s == "additive") return TwoLevelForm::additive;
  throw ConfigError("unknown two-level form '" + s + "'");
}

JhatSign jhat_sign_from_string(const std::string& s) {
  if (s == "plus") return JhatSign::plus;
  if (s == "minus") return JhatSign::minus;
  throw ConfigError("unknown jhat sign '" + s + "'");
}

}  // namespace kktdd
