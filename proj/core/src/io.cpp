#include "poisson_chaos/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace poisson_chaos {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), end);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_escape(fields[i]);
  }
  os << "\r\n";
}

namespace {

void sample_rows(std::ostream& os, const SpatioTemporalSample& s, const std::vector<double>* marks) {
  std::vector<std::string> header{"index"};
  const std::size_t dim = s.space.location_dimension();
  if (s.space.kind == SpaceKind::finite) {
    header.push_back("cell");
  } else {
    for (std::size_t a = 1; a <= dim; ++a) header.push_back("x_" + std::to_string(a));
  }
  header.push_back("arrival_time");
  if (marks) header.push_back("mark");
  write_csv_row(os, header);
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    if (s.space.kind == SpaceKind::finite) {
      row.push_back(std::to_string(s.cells[i]));
    } else {
      for (double x : s.location(i)) row.push_back(format_double(x));
    }
    row.push_back(format_double(s.times[i]));
    if (marks) row.push_back(format_double((*marks)[i]));
    write_csv_row(os, row);
  }
}

nlohmann::json space_to_json(const SpaceConfig& space) {
  nlohmann::json j;
  j["kind"] = to_string(space.kind);
  if (space.kind == SpaceKind::finite) {
    j["weights"] = space.weights;
  } else {
    j["dimension"] = space.dimension;
    j["sides"] = space.sides;
    j["density"] = space.density;
  }
  j["total_mass"] = space.total_mass();
  return j;
}

}  // namespace

void write_sample_csv(std::ostream& os, const SpatioTemporalSample& sample) { sample_rows(os, sample, nullptr); }
void write_sample_csv(std::ostream& os, const MarkedSample& sample) { sample_rows(os, sample.base, &sample.marks); }

std::string space_json(const SpaceConfig& space) { return space_to_json(space).dump(); }

std::string sample_envelope_json(const SpatioTemporalSample& sample) {
  nlohmann::json j;
  j["space"] = space_to_json(sample.space);
  j["horizon"] = sample.horizon;
  j["seed"] = sample.seed;
  j["points"] = sample.size();
  return j.dump(2);
}

void write_kernel_csv(std::ostream& os, const DiscreteKernel& kernel) {
  const auto& v = kernel.values;
  std::vector<std::string> header;
  for (int a = 1; a <= v.order(); ++a) header.push_back("i" + std::to_string(a));
  header.push_back("value");
  header.push_back("weight");
  write_csv_row(os, header);
  std::vector<std::size_t> idx(static_cast<std::size_t>(v.order()));
  for (std::size_t f = 0; f < v.size(); ++f) {
    v.unflatten(f, idx);
    std::vector<std::string> row;
    for (std::size_t i : idx) row.push_back(std::to_string(i));
    row.push_back(format_double(v[f]));
    row.push_back(format_double(weight_product(kernel.grid, v, f)));
    write_csv_row(os, row);
  }
}

}  // namespace poisson_chaos
