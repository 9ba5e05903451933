#include "tcljump/mastereq.hpp"

#include "tcljump/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <memory>
#include <string>

namespace tcljump {

TimeLocalGenerator::TimeLocalGenerator(std::size_t dim, std::size_t channels, EvalFn eval,
                                       bool trace_preserving, std::optional<double> breakdown_time)
    : dim_(dim),
      channels_(channels),
      eval_(std::move(eval)),
      trace_preserving_(trace_preserving),
      breakdown_(breakdown_time) {
  if (dim_ == 0) throw DimensionError("TimeLocalGenerator: dim must be >= 1");
  if (!eval_) throw DomainError("TimeLocalGenerator: empty evaluation function");
}

GeneratorTerms TimeLocalGenerator::operator()(double t) const {
  GeneratorTerms g = eval_(t);
  auto check = [&](const COperator& op, const char* name) {
    if (op.dim() != dim_ || static_cast<std::size_t>(op.eigen().cols()) != dim_) {
      throw DimensionError(std::string("TimeLocalGenerator: ") + name + " has the wrong shape");
    }
  };
  check(g.A, "A");
  check(g.B, "B");
  if (g.channels.size() != channels_) {
    throw DimensionError("TimeLocalGenerator: channel count changed during evaluation");
  }
  for (const Channel& ch : g.channels) {
    check(ch.C, "C");
    check(ch.D, "D");
  }
  return g;
}

double TimeLocalGenerator::trace_defect(double t) const {
  const GeneratorTerms g = (*this)(t);
  Eigen::MatrixXcd s = g.A.eigen() + g.B.eigen().adjoint();
  for (const Channel& ch : g.channels) s += ch.D.eigen().adjoint() * ch.C.eigen();
  return s.cwiseAbs().maxCoeff();
}

namespace {

Eigen::MatrixXcd rhs(const GeneratorTerms& g, const Eigen::MatrixXcd& rho) {
  Eigen::MatrixXcd out = g.A.eigen() * rho + rho * g.B.eigen().adjoint();
  for (const Channel& ch : g.channels) out += ch.C.eigen() * rho * ch.D.eigen().adjoint();
  return out;
}

}  // namespace

COperator TimeLocalGenerator::apply(double t, const COperator& rho) const {
  if (rho.dim() != dim_) throw DimensionError("TimeLocalGenerator::apply: state dimension mismatch");
  return COperator(rhs((*this)(t), rho.eigen()));
}

TimeLocalGenerator tcl_generator(const ModelSpec& m, RateMethod method, double horizon) {
  if (method == RateMethod::GmeBorn) {
    throw DomainError("tcl_generator: the GME-Born description is not time-local");
  }
  auto rate = std::make_shared<const RateFunction>(m, method, horizon);
  const COperator P = excited_projector();
  const COperator sm = sigma_minus();
  auto eval = [rate, P, sm](double t) {
    const RatePair r = (*rate)(t);
    const double root = std::sqrt(std::abs(r.gamma));
    const double sign = r.gamma < 0.0 ? -1.0 : 1.0;
    const COperator A = cplx(-0.5 * r.gamma, -0.5 * r.shift) * P;
    return GeneratorTerms{A, A, {Channel{cplx(sign * root) * sm, cplx(root) * sm}}};
  };
  return TimeLocalGenerator(2, 1, eval, true, rate->breakdown_time());
}

TimeLocalGenerator lindblad_generator(const LindbladData& data) {
  const std::size_t dim = data.dim();
  if (dim == 0) throw DimensionError("lindblad_generator: empty Hamiltonian");
  for (const LindbladChannel& ch : data.channels) {
    if (ch.L.dim() != dim) throw DimensionError("lindblad_generator: jump operator dimension mismatch");
    if (!ch.gamma) throw DomainError("lindblad_generator: missing rate function");
  }
  auto eval = [data](double t) {
    Eigen::MatrixXcd A = cplx(0.0, -1.0) * data.H.eigen();
    GeneratorTerms g;
    for (const LindbladChannel& ch : data.channels) {
      const double gamma = ch.gamma(t);
      if (gamma < 0.0) {
        throw DomainError("lindblad_generator: negative rate " + std::to_string(gamma) + " at t=" +
                          std::to_string(t) + "; use tcl_generator for non-Lindblad equations");
      }
      const double shift = ch.shift ? ch.shift(t) : 0.0;
      A -= 0.5 * cplx(gamma, shift) * (ch.L.eigen().adjoint() * ch.L.eigen());
      const COperator J = cplx(std::sqrt(gamma)) * ch.L;
      g.channels.push_back(Channel{J, J});
    }
    g.A = COperator(A);
    g.B = g.A;
    return g;
  };
  return TimeLocalGenerator(dim, data.channels.size(), eval, true);
}

LindbladData markov_lindblad(const ModelSpec& m) {
  const RatePair r = markov_rate(m);
  if (r.gamma < 0.0) throw DomainError("markov_lindblad: negative Markov rate");
  LindbladData data{COperator::zero(2), {}};
  data.channels.push_back(LindbladChannel{sigma_minus(), [g = r.gamma](double) { return g; },
                                          [s = r.shift](double) { return s; }});
  return data;
}

void check_density(const COperator& rho) {
  const Eigen::MatrixXcd& m = rho.eigen();
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError("density matrix must be square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-9) throw DomainError("density matrix is not Hermitian");
  if (std::abs(m.trace() - cplx(1.0)) > 1e-9) throw DomainError("density matrix trace is not 1");
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) throw DomainError("density matrix is not positive semidefinite");
}

DensitySeries propagate(const TimeLocalGenerator& g, const COperator& rho0, const TimeGrid& grid) {
  if (rho0.dim() != g.dim()) throw DimensionError("propagate: initial state dimension mismatch");
  check_density(rho0);
  DensitySeries out{grid, {}, false, std::nullopt};
  out.rho.reserve(grid.size());
  out.rho.push_back(rho0);

  const auto stop = g.breakdown_time();
  const double dt = grid.dt;
  Eigen::MatrixXcd rho = rho0.eigen();
  for (std::size_t k = 0; k < grid.steps; ++k) {
    const double t = grid[k];
    if (stop && grid[k + 1] >= *stop) {
      out.truncated = true;
      out.stopped_at = *stop;
      break;
    }
    try {
      const GeneratorTerms g0 = g(t);
      const GeneratorTerms gh = g(t + 0.5 * dt);
      const GeneratorTerms g1 = g(t + dt);
      const Eigen::MatrixXcd k1 = rhs(g0, rho);
      const Eigen::MatrixXcd k2 = rhs(gh, rho + (0.5 * dt) * k1);
      const Eigen::MatrixXcd k3 = rhs(gh, rho + (0.5 * dt) * k2);
      const Eigen::MatrixXcd k4 = rhs(g1, rho + dt * k3);
      rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const AmplitudeZeroError& e) {
      out.truncated = true;
      out.stopped_at = e.time();
      break;
    }
    const double big = rho.cwiseAbs().maxCoeff();
    if (!(big <= 1e6)) {
      throw InstabilityError("propagate: density matrix entry reached " + std::to_string(big) +
                                 " at t=" + std::to_string(grid[k + 1]),
                             grid[k + 1]);
    }
    out.rho.emplace_back(rho);
  }
  return out;
}

DensitySeries subsample(const DensitySeries& series, const TimeGrid& coarse) {
  const std::size_t stride = series.grid.stride_to(coarse);
  DensitySeries out{coarse, {}, series.truncated, series.stopped_at};
  for (std::size_t k = 0; k < coarse.size() && k * stride < series.rho.size(); ++k) {
    out.rho.push_back(series.rho[k * stride]);
  }
  return out;
}

}  // namespace tcljump
