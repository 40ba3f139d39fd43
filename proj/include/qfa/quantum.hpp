#pragma once

// Quantum core: state vectors, density matrices, measurements and
// Kraus-operator channels.  All operations are pure functions over
// immutable values and work in both scalar modes.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfa/errors.hpp"
#include "qfa/types.hpp"

namespace qfa {

/// Default tolerance for structural validation (unitarity, stochasticity, ...).
inline constexpr double kValidationTol = 1e-9;
/// Default tolerance for conservation assertions (norm, trace, ledgers).
inline constexpr double kConservationTol = 1e-12;

/// A partition of the basis indices {0,...,dim-1} into labeled blocks.
struct BasisPartition {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> blocks;

  int dim() const {
    int n = 0;
    for (const auto& b : blocks) n += static_cast<int>(b.size());
    return n;
  }

  void validate(int expected_dim) const {
    if (labels.size() != blocks.size())
      throw ValidationError("partition labels and blocks differ in count");
    std::vector<char> seen(expected_dim, 0);
    for (const auto& block : blocks)
      for (int idx : block) {
        if (idx < 0 || idx >= expected_dim)
          throw ValidationError("partition index out of range: " + std::to_string(idx));
        if (seen[idx]) throw ValidationError("partition blocks overlap at index " + std::to_string(idx));
        seen[idx] = 1;
      }
    for (int idx = 0; idx < expected_dim; ++idx)
      if (!seen[idx]) throw ValidationError("partition misses index " + std::to_string(idx));
  }
};

/// A channel given by its Kraus family {E_1, ..., E_k}.
template <class S>
struct Superoperator {
  std::vector<Mat<S>> kraus;

  int dim() const { return kraus.empty() ? 0 : static_cast<int>(kraus.front().rows()); }

  static Superoperator unitary(Mat<S> u) { return Superoperator{{std::move(u)}}; }
};

using SuperC = Superoperator<Cplx>;
using SuperX = Superoperator<CxRad>;

template <class S>
bool validate_unitary(const Mat<S>& m, double tol = kValidationTol) {
  if (m.rows() != m.cols()) throw DimensionError("unitarity check needs a square matrix");
  const Mat<S> defect = m.adjoint() * m - identity<S>(m.rows());
  return max_abs_leq(defect, tol);
}

/// Completeness relation sum_i E_i^dag E_i = I.
template <class S>
bool validate_kraus(const Superoperator<S>& e, double tol = kValidationTol) {
  if (e.kraus.empty()) throw DimensionError("empty Kraus family");
  const Eigen::Index n = e.kraus.front().rows();
  for (const auto& k : e.kraus)
    if (k.rows() != n || k.cols() != n)
      throw DimensionError("Kraus operators disagree in dimension");
  Mat<S> acc = Mat<S>::Zero(n, n);
  for (const auto& k : e.kraus) acc += k.adjoint() * k;
  return max_abs_leq<S>(acc - identity<S>(n), tol);
}

/// Bistochastic channels additionally satisfy sum_i E_i E_i^dag = I.
template <class S>
bool validate_bistochastic(const Superoperator<S>& e, double tol = kValidationTol) {
  if (!validate_kraus(e, tol)) return false;
  const Eigen::Index n = e.kraus.front().rows();
  Mat<S> acc = Mat<S>::Zero(n, n);
  for (const auto& k : e.kraus) acc += k * k.adjoint();
  return max_abs_leq<S>(acc - identity<S>(n), tol);
}

/// rho' = sum_i E_i rho E_i^dag
template <class S>
Mat<S> apply_superoperator(const Superoperator<S>& e, const Mat<S>& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
  if (e.dim() != rho.rows()) throw DimensionError("channel/state dimension mismatch");
  Mat<S> out = Mat<S>::Zero(rho.rows(), rho.cols());
  for (const auto& k : e.kraus) out += k * rho * k.adjoint();
  return out;
}

template <class S>
S trace(const Mat<S>& m) {
  S t(0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

template <class S>
struct MeasureOutcome {
  std::string label;
  real_of<S> probability;
  Vec<S> post_state;  // renormalized restriction
};

/// Projective measurement of |psi> w.r.t. a basis partition.  Outcomes with
/// probability zero are omitted; surviving post-states are renormalized.
template <class S>
std::vector<MeasureOutcome<S>> partial_measure(const Vec<S>& psi, const BasisPartition& p) {
  p.validate(static_cast<int>(psi.size()));
  std::vector<MeasureOutcome<S>> out;
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    Vec<S> restricted = Vec<S>::Zero(psi.size());
    for (int idx : p.blocks[b]) restricted(idx) = psi(idx);
    real_of<S> prob = squared_norm<S>(restricted);
    const bool vanishes = num<S>::exact ? rnum<real_of<S>>::is_zero(prob, 0.0)
                                        : num<S>::to_double(prob) < 1e-15;
    if (vanishes) continue;
    const real_of<S> scale = num<S>::sqrt(prob);
    for (int idx : p.blocks[b]) restricted(idx) = restricted(idx) / S(scale);
    out.push_back({p.labels[b], std::move(prob), std::move(restricted)});
  }
  return out;
}

/// rho = sum_j p_j |psi_j><psi_j|
template <class S>
Mat<S> density_of_mixture(const std::vector<std::pair<real_of<S>, Vec<S>>>& pairs,
                          double tol = kValidationTol) {
  if (pairs.empty()) throw ValidationError("empty mixture");
  const Eigen::Index n = pairs.front().second.size();
  real_of<S> total = num<S>::abs2(S(0));
  for (const auto& [p, psi] : pairs) {
    if (psi.size() != n) throw DimensionError("mixture states disagree in dimension");
    if (num<S>::to_double(p) < -tol) throw ValidationError("negative mixture weight");
    total = total + p;
  }
  if (!num<S>::abs_leq(total - num<S>::abs2(S(1)), tol))
    throw ValidationError("mixture weights do not sum to 1");
  Mat<S> rho = Mat<S>::Zero(n, n);
  for (const auto& [p, psi] : pairs) rho += S(p) * (psi * psi.adjoint());
  return rho;
}

/// Unit-norm check for state vectors.
template <class S>
bool validate_state(const Vec<S>& psi, double tol = kValidationTol) {
  const real_of<S> n2 = squared_norm<S>(psi);
  return num<S>::abs_leq(n2 - num<S>::abs2(S(1)), tol);
}

/// Hermitian + unit-trace check; positive semidefiniteness is left to
/// dedicated debug/test paths (see is_positive_semidefinite).
template <class S>
bool validate_density(const Mat<S>& rho, double tol = kValidationTol) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix must be square");
  if (!max_abs_leq<S>(Mat<S>(rho - rho.adjoint()), tol)) return false;
  return num<S>::cabs_leq(trace(rho) - S(1), tol);
}

/// Eigenvalue bound check, float mode only (test/debug path).
inline bool is_positive_semidefinite(const MatC& rho, double tol = kValidationTol) {
  Eigen::SelfAdjointEigenSolver<MatC> es(rho);
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace qfa
