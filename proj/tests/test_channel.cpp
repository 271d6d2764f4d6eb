// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "afrelay/channel.hpp"
#include "afrelay/error.hpp"
#include "oracles.hpp"

using namespace afrelay;
using namespace afrelay::testing;

namespace {

// Sample variance (zero-mean estimator) over 10^5 entries per terminal.
std::pair<double, double> sample_variances(SystemConfig c) {
  c.m_r = 10;
  double s1 = 0.0, s2 = 0.0;
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) {
    const auto ch = draw_channels(c, 1000 + k);
    s1 += ch.h1f.squaredNorm();
    s2 += ch.h2f.squaredNorm();
  }
  const double count = 10.0 * draws;
  return {s1 / count, s2 / count};
}

}  // namespace

TEST_CASE("channel variance follows path loss") {
  SystemConfig c;
  c.d2 = 0.5;
  c.nu = 3.0;
  const auto [v1, v2] = sample_variances(c);
  CHECK(std::abs(v1 / 8.0 - 1.0) < 0.02);
  CHECK(std::abs(v2 / 8.0 - 1.0) < 0.02);

  c.nu = 0.0;
  c.d2 = 0.2;
  const auto [u1, u2] = sample_variances(c);
  CHECK(std::abs(u1 - 1.0) < 0.02);
  CHECK(std::abs(u2 - 1.0) < 0.02);

  c.nu = 3.0;
  c.d2 = 0.25;
  const auto [w1, w2] = sample_variances(c);
  CHECK(std::abs(w1 / std::pow(0.75, -3.0) - 1.0) < 0.02);
  CHECK(std::abs(w2 / 64.0 - 1.0) < 0.02);
}

TEST_CASE("draw_channels is deterministic per seed") {
  SystemConfig c;
  const auto a = draw_channels(c, 42);
  const auto b = draw_channels(c, 42);
  const auto d = draw_channels(c, 43);
  CHECK(a.h1f == b.h1f);
  CHECK(a.h2f == b.h2f);
  CHECK(a.h1f != d.h1f);
}

TEST_CASE("reciprocity copies forward channels") {
  SystemConfig c;
  const auto r = draw_channels(c, 9);
  CHECK(r.h1b == r.h1f);
  CHECK(r.h2b == r.h2f);
  c.reciprocal = false;
  const auto nr = draw_channels(c, 9);
  CHECK(nr.h1f == r.h1f);  // forward draws come first in the stream
  CHECK(nr.h1b != nr.h1f);
}

TEST_CASE("relay_rx_covariance") {
  SystemConfig c;
  c.m_r = 3;
  c.p_nr = 0.3;
  ChannelSet zero{ComplexVector::Zero(3), ComplexVector::Zero(3), ComplexVector::Zero(3),
                  ComplexVector::Zero(3)};
  const auto r0 = relay_rx_covariance(c, zero);
  CHECK((r0.matrix() - 0.3 * ComplexMatrix::Identity(3, 3)).norm() == doctest::Approx(0.0));

  c.m_r = 1;
  c.p_nr = 0.1;
  ChannelSet scalar{ComplexVector::Constant(1, 1.0), ComplexVector::Constant(1, 2.0),
                    ComplexVector::Constant(1, 1.0), ComplexVector::Constant(1, 2.0)};
  CHECK(relay_rx_covariance(c, scalar)(0, 0).real() == doctest::Approx(5.1));

  c.m_r = 4;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto ch = draw_channels(c, seed);
    const auto e = hermitian_eig(relay_rx_covariance(c, ch));
    CHECK(e.values(0) >= c.p_nr - 1e-10);
  }
}

TEST_CASE("colored relay noise is taken from the config") {
  SystemConfig c;
  c.m_r = 2;
  c.white_relay_noise = false;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  ComplexMatrix r(2, 2);
  r << 2.0, 0.5, 0.5, 1.0;
  c.relay_noise_cov = HermitianMatrix(r);
  c.validate();
  CHECK((relay_noise_covariance(c).matrix() - r).norm() == 0.0);
}

TEST_CASE("config file round trip and errors") {
  SystemConfig c;
  c.m_r = 5;
  c.p_t1 = 2.5;
  c.d2 = 0.25;
  c.nu = 2.0;
  c.reciprocal = false;
  std::istringstream in(to_string(c) + "\n# comment line\n");
  const SystemConfig back = parse_config(in);
  CHECK(back.m_r == 5);
  CHECK(back.p_t1 == 2.5);
  CHECK(back.d2 == 0.25);
  CHECK(back.nu == 2.0);
  CHECK_FALSE(back.reciprocal);

  std::istringstream unknown("m_r=3\nfoo=1\n");
  CHECK_THROWS_AS(parse_config(unknown), InvalidInput);
  std::istringstream bad_d2("d2=1.5\n");
  CHECK_THROWS_AS(parse_config(bad_d2), InvalidInput);
  std::istringstream bad_power("p_tr=0\n");
  CHECK_THROWS_AS(parse_config(bad_power), InvalidInput);
  std::istringstream no_eq("m_r 3\n");
  CHECK_THROWS_AS(parse_config(no_eq), InvalidInput);
}
