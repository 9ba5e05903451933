// csv.hpp: CSV exporters. Every file starts with a "# time unit: ..." line;
// numbers are written with 17 significant digits.

#pragma once

#include "tcljump/ensemble.hpp"
#include "tcljump/grid.hpp"
#include "tcljump/mastereq.hpp"
#include "tcljump/rates.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace tcljump {

// Shortest form is not used: fixed 17 significant digits round-trip exactly.
std::string format_double(double x);

// t, gamma, shift, method, model-id
void write_rate_csv(std::ostream& os, const RateCurve& curve, RateMethod method, const ModelSpec& m);
// t, value
void write_population_csv(std::ostream& os, const TimeGrid& grid, const std::vector<double>& values,
                          const std::string& time_unit);
// t, re, im
void write_complex_csv(std::ostream& os, const TimeGrid& grid, const std::vector<cplx>& values,
                       const std::string& time_unit);
// dim 2: t, rho00_re, rho01_re, rho01_im, rho11_re; otherwise t and rho<a><b>_re/_im for all entries.
void write_density_csv(std::ostream& os, const DensitySeries& series, const std::string& time_unit);
// t, rho11_hat, rho11_se, rho01_re_hat, rho01_im_hat, rho01_re_se, rho01_im_se, n_traj
void write_ensemble_csv(std::ostream& os, const EnsembleEstimate& e, const std::string& time_unit);
// trajectory_index, t_jump, channel
void write_jump_log_csv(std::ostream& os, const std::vector<JumpEvent>& jumps,
                        const std::string& time_unit);

}  // namespace tcljump
