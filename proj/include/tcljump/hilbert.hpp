// hilbert.hpp: dense complex vectors/operators and the doubled-space state
//
// Basis convention for two-level systems: index 0 is the ground state |0>,
// index 1 the excited state |1>. sigma_minus() = |0><1|.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace tcljump {

using cplx = std::complex<double>;

class CVector {
 public:
  CVector() = default;
  explicit CVector(Eigen::VectorXcd v);
  CVector(std::initializer_list<cplx> entries);

  static CVector zero(std::size_t dim);
  static CVector basis(std::size_t dim, std::size_t k);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
  cplx operator[](std::size_t k) const { return v_(static_cast<Eigen::Index>(k)); }
  const Eigen::VectorXcd& eigen() const noexcept { return v_; }

  double norm2() const noexcept { return v_.squaredNorm(); }
  double norm() const noexcept { return v_.norm(); }

 private:
  Eigen::VectorXcd v_;
};

CVector operator+(const CVector& a, const CVector& b);
CVector operator-(const CVector& a, const CVector& b);
CVector operator*(cplx s, const CVector& v);
// <a, b> = sum conj(a_k) b_k
cplx inner(const CVector& a, const CVector& b);

class COperator {
 public:
  COperator() = default;
  explicit COperator(Eigen::MatrixXcd m);
  COperator(std::initializer_list<std::initializer_list<cplx>> rows);

  static COperator zero(std::size_t dim);
  static COperator identity(std::size_t dim);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  cplx operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  const Eigen::MatrixXcd& eigen() const noexcept { return m_; }

  COperator adjoint() const;
  cplx trace() const { return m_.trace(); }
  // Largest singular value.
  double op_norm() const;

 private:
  Eigen::MatrixXcd m_;
};

COperator operator+(const COperator& a, const COperator& b);
COperator operator-(const COperator& a, const COperator& b);
COperator operator*(const COperator& a, const COperator& b);
COperator operator*(cplx s, const COperator& a);
CVector apply(const COperator& op, const CVector& v);
// max_{ij} |a_ij - b_ij|
double max_abs_diff(const COperator& a, const COperator& b);

COperator sigma_minus();
COperator sigma_plus();
// sigma_plus * sigma_minus = |1><1|
COperator excited_projector();

// |phi><psi|, entries phi_a conj(psi_b)
COperator outer_product(const CVector& phi, const CVector& psi);

struct DoubledState {
  CVector phi;
  CVector psi;

  DoubledState() = default;
  DoubledState(CVector phi_, CVector psi_);

  std::size_t dim() const noexcept { return phi.dim(); }
  double norm2() const noexcept { return phi.norm2() + psi.norm2(); }
  // |phi><psi|
  COperator density() const { return outer_product(phi, psi); }
};

// (Fblock phi, Gblock psi)
DoubledState doubled_apply(const COperator& fblock, const COperator& gblock,
                           const DoubledState& theta);

}  // namespace tcljump
