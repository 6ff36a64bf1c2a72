#include <doctest.h>

#include <cmath>
#include <sstream>
#include "json.hpp"

#include "poisson_chaos/io.hpp"

using namespace poisson_chaos;

TEST_CASE("csv escaping") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
  std::ostringstream os;
  write_csv_row(os, {"x", "y,z"});
  CHECK(os.str() == "x,\"y,z\"\r\n");
}

TEST_CASE("doubles round-trip") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5, 0.0}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("sample output") {
  const auto s = sample_process(SpaceConfig::torus(2, 5.0), 1.0, 3);
  std::ostringstream os;
  write_sample_csv(os, s);
  std::size_t lines = 0;
  for (char ch : os.str()) lines += ch == '\n';
  CHECK(lines == s.size() + 1);
  const auto j = nlohmann::json::parse(sample_envelope_json(s));
  CHECK(j["horizon"] == 1.0);
  CHECK(j["seed"] == 3);
}

TEST_CASE("kernel csv") {
  const DiscreteKernel g{Grid::finite({1.0, 2.0}), Tensor(1, 2, std::vector<double>{3.0, 4.0})};
  std::ostringstream os;
  write_kernel_csv(os, g);
  CHECK(os.str().rfind("i1,value,weight\r\n", 0) == 0);
}
