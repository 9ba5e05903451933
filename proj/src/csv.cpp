#include "tcljump/csv.hpp"

#include "tcljump/errors.hpp"

#include <charconv>

namespace tcljump {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void unit_line(std::ostream& os, const std::string& unit) { os << "# time unit: " << unit << '\n'; }

}  // namespace

void write_rate_csv(std::ostream& os, const RateCurve& curve, RateMethod method, const ModelSpec& m) {
  unit_line(os, m.time_unit());
  os << "t,gamma,shift,method,model-id\n";
  const std::string tag = to_string(method);
  const std::string id = m.id();
  for (std::size_t k = 0; k < curve.t.size(); ++k) {
    os << format_double(curve.t[k]) << ',' << format_double(curve.values[k].gamma) << ','
       << format_double(curve.values[k].shift) << ',' << tag << ",\"" << id << "\"\n";
  }
}

void write_population_csv(std::ostream& os, const TimeGrid& grid, const std::vector<double>& values,
                          const std::string& time_unit) {
  unit_line(os, time_unit);
  os << "t,value\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    os << format_double(grid[k]) << ',' << format_double(values[k]) << '\n';
  }
}

void write_complex_csv(std::ostream& os, const TimeGrid& grid, const std::vector<cplx>& values,
                       const std::string& time_unit) {
  unit_line(os, time_unit);
  os << "t,re,im\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    os << format_double(grid[k]) << ',' << format_double(values[k].real()) << ','
       << format_double(values[k].imag()) << '\n';
  }
}

void write_density_csv(std::ostream& os, const DensitySeries& series, const std::string& time_unit) {
  unit_line(os, time_unit);
  if (series.rho.empty()) {
    os << "t\n";
    return;
  }
  const std::size_t dim = series.rho.front().dim();
  if (dim == 2) {
    os << "t,rho00_re,rho01_re,rho01_im,rho11_re\n";
    for (std::size_t k = 0; k < series.rho.size(); ++k) {
      const COperator& r = series.rho[k];
      os << format_double(series.grid[k]) << ',' << format_double(r(0, 0).real()) << ','
         << format_double(r(0, 1).real()) << ',' << format_double(r(0, 1).imag()) << ','
         << format_double(r(1, 1).real()) << '\n';
    }
    return;
  }
  os << 't';
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) os << ",rho" << a << b << "_re,rho" << a << b << "_im";
  }
  os << '\n';
  for (std::size_t k = 0; k < series.rho.size(); ++k) {
    os << format_double(series.grid[k]);
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = 0; b < dim; ++b) {
        const cplx v = series.rho[k](a, b);
        os << ',' << format_double(v.real()) << ',' << format_double(v.imag());
      }
    }
    os << '\n';
  }
}

void write_ensemble_csv(std::ostream& os, const EnsembleEstimate& e, const std::string& time_unit) {
  if (!e.rho_hat.empty() && e.rho_hat.front().dim() != 2) {
    throw DimensionError("write_ensemble_csv: two-level estimates only");
  }
  unit_line(os, time_unit);
  os << "t,rho11_hat,rho11_se,rho01_re_hat,rho01_im_hat,rho01_re_se,rho01_im_se,n_traj\n";
  for (std::size_t k = 0; k < e.rho_hat.size(); ++k) {
    const COperator& r = e.rho_hat[k];
    const COperator& s = e.se[k];
    os << format_double(e.grid[k]) << ',' << format_double(r(1, 1).real()) << ','
       << format_double(s(1, 1).real()) << ',' << format_double(r(0, 1).real()) << ','
       << format_double(r(0, 1).imag()) << ',' << format_double(s(0, 1).real()) << ','
       << format_double(s(0, 1).imag()) << ',' << e.n_traj << '\n';
  }
}

void write_jump_log_csv(std::ostream& os, const std::vector<JumpEvent>& jumps,
                        const std::string& time_unit) {
  unit_line(os, time_unit);
  os << "trajectory_index,t_jump,channel\n";
  for (const JumpEvent& j : jumps) {
    os << j.trajectory_index << ',' << format_double(j.t) << ',' << j.channel << '\n';
  }
}

}  // namespace tcljump
