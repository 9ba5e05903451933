#include "tcljump/hilbert.hpp"

#include "tcljump/errors.hpp"

#include <string>

namespace tcljump {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw DimensionError(std::string(where) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

CVector::CVector(Eigen::VectorXcd v) : v_(std::move(v)) {
  if (v_.size() < 1) throw DimensionError("CVector: dimension must be >= 1");
}

CVector::CVector(std::initializer_list<cplx> entries)
    : v_(static_cast<Eigen::Index>(entries.size())) {
  if (entries.size() == 0) throw DimensionError("CVector: dimension must be >= 1");
  Eigen::Index k = 0;
  for (const cplx& e : entries) v_(k++) = e;
}

CVector CVector::zero(std::size_t dim) {
  return CVector(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim)));
}

CVector CVector::basis(std::size_t dim, std::size_t k) {
  if (k >= dim) throw DimensionError("CVector::basis: index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return CVector(std::move(v));
}

CVector operator+(const CVector& a, const CVector& b) {
  require_same_dim(a.dim(), b.dim(), "CVector +");
  return CVector(a.eigen() + b.eigen());
}

CVector operator-(const CVector& a, const CVector& b) {
  require_same_dim(a.dim(), b.dim(), "CVector -");
  return CVector(a.eigen() - b.eigen());
}

CVector operator*(cplx s, const CVector& v) { return CVector(s * v.eigen()); }

cplx inner(const CVector& a, const CVector& b) {
  require_same_dim(a.dim(), b.dim(), "inner");
  return a.eigen().dot(b.eigen());
}

COperator::COperator(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() != m_.cols()) {
    throw DimensionError("COperator: matrix must be square with dim >= 1");
  }
}

COperator::COperator(std::initializer_list<std::initializer_list<cplx>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  m_.resize(n, n);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw DimensionError("COperator: matrix must be square");
    }
    Eigen::Index c = 0;
    for (const cplx& e : row) m_(r, c++) = e;
    ++r;
  }
  if (n < 1) throw DimensionError("COperator: dimension must be >= 1");
}

COperator COperator::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return COperator(Eigen::MatrixXcd::Zero(n, n));
}

COperator COperator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return COperator(Eigen::MatrixXcd::Identity(n, n));
}

COperator COperator::adjoint() const { return COperator(m_.adjoint()); }

double COperator::op_norm() const {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m_);
  return svd.singularValues()(0);
}

COperator operator+(const COperator& a, const COperator& b) {
  require_same_dim(a.dim(), b.dim(), "COperator +");
  return COperator(a.eigen() + b.eigen());
}

COperator operator-(const COperator& a, const COperator& b) {
  require_same_dim(a.dim(), b.dim(), "COperator -");
  return COperator(a.eigen() - b.eigen());
}

COperator operator*(const COperator& a, const COperator& b) {
  require_same_dim(a.dim(), b.dim(), "COperator *");
  return COperator(a.eigen() * b.eigen());
}

COperator operator*(cplx s, const COperator& a) { return COperator(s * a.eigen()); }

CVector apply(const COperator& op, const CVector& v) {
  require_same_dim(op.dim(), v.dim(), "apply");
  return CVector(op.eigen() * v.eigen());
}

double max_abs_diff(const COperator& a, const COperator& b) {
  require_same_dim(a.dim(), b.dim(), "max_abs_diff");
  return (a.eigen() - b.eigen()).cwiseAbs().maxCoeff();
}

COperator sigma_minus() { return COperator{{0.0, 1.0}, {0.0, 0.0}}; }

COperator sigma_plus() { return COperator{{0.0, 0.0}, {1.0, 0.0}}; }

COperator excited_projector() { return COperator{{0.0, 0.0}, {0.0, 1.0}}; }

COperator outer_product(const CVector& phi, const CVector& psi) {
  require_same_dim(phi.dim(), psi.dim(), "outer_product");
  return COperator(phi.eigen() * psi.eigen().adjoint());
}

DoubledState::DoubledState(CVector phi_, CVector psi_)
    : phi(std::move(phi_)), psi(std::move(psi_)) {
  require_same_dim(phi.dim(), psi.dim(), "DoubledState");
}

DoubledState doubled_apply(const COperator& fblock, const COperator& gblock,
                           const DoubledState& theta) {
  require_same_dim(fblock.dim(), theta.dim(), "doubled_apply");
  require_same_dim(gblock.dim(), theta.dim(), "doubled_apply");
  return DoubledState(apply(fblock, theta.phi), apply(gblock, theta.psi));
}

}  // namespace tcljump
