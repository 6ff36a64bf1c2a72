#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "poisson_chaos/kernels.hpp"
#include "poisson_chaos/point_process.hpp"

namespace poisson_chaos {

// Shortest round-trip representation ("%.17g"-equivalent, locale independent).
std::string format_double(double v);

// RFC 4180: quote fields containing comma, quote, CR or LF.
std::string csv_escape(const std::string& field);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

// Columns: index, x_1..x_N (or cell), arrival_time[, mark].
void write_sample_csv(std::ostream& os, const SpatioTemporalSample& sample);
void write_sample_csv(std::ostream& os, const MarkedSample& sample);

// JSON envelope with the space configuration, horizon and seed.
std::string sample_envelope_json(const SpatioTemporalSample& sample);
std::string space_json(const SpaceConfig& space);

// Columns: i1..id, value, weight.
void write_kernel_csv(std::ostream& os, const DiscreteKernel& kernel);

}  // namespace poisson_chaos
