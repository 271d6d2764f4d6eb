// SPDX-License-Identifier: Apache-2.0
#include "afrelay/channel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "afrelay/error.hpp"
#include "afrelay/rng.hpp"

namespace afrelay {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidInput("config: bad number for '" + key + "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidInput("config: bad boolean for '" + key + "': " + v);
}

ComplexVector draw_cn(Xoshiro256& rng, int n, double variance) {
  const double s = std::sqrt(variance / 2.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = cplx(s * re, s * im);
  }
  return v;
}

}  // namespace

void SystemConfig::validate() const {
  if (m_r < 1) throw InvalidInput("config: m_r must be >= 1");
  for (double p : {p_t1, p_t2, p_tr, p_n1, p_n2, p_nr})
    if (!(p > 0.0) || !std::isfinite(p))
      throw InvalidInput("config: all powers must be positive and finite");
  if (!(d2 > 0.0 && d2 < 1.0)) throw InvalidInput("config: d2 must lie in (0, 1)");
  if (!(nu >= 0.0)) throw InvalidInput("config: nu must be >= 0");
  if (!white_relay_noise) {
    if (!relay_noise_cov)
      throw InvalidInput("config: colored relay noise requires relay_noise_cov");
    if (relay_noise_cov->dim() != m_r)
      throw InvalidInput("config: relay_noise_cov must be m_r x m_r");
  }
}

SystemConfig parse_config(std::istream& in) {
  SystemConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config: line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "m_r") {
      int m = 0;
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), m);
      if (ec != std::errc{} || p != val.data() + val.size())
        throw InvalidInput("config: bad integer for 'm_r': " + val);
      c.m_r = m;
    } else if (key == "p_t1") c.p_t1 = parse_double(key, val);
    else if (key == "p_t2") c.p_t2 = parse_double(key, val);
    else if (key == "p_tr") c.p_tr = parse_double(key, val);
    else if (key == "p_n1") c.p_n1 = parse_double(key, val);
    else if (key == "p_n2") c.p_n2 = parse_double(key, val);
    else if (key == "p_nr") c.p_nr = parse_double(key, val);
    else if (key == "d2") c.d2 = parse_double(key, val);
    else if (key == "nu") c.nu = parse_double(key, val);
    else if (key == "white_relay_noise") c.white_relay_noise = parse_bool(key, val);
    else if (key == "reciprocal") c.reciprocal = parse_bool(key, val);
    else throw InvalidInput("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidInput("config: cannot open " + path);
  return parse_config(f);
}

std::string to_string(const SystemConfig& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "m_r=" << c.m_r << '\n'
     << "p_t1=" << c.p_t1 << '\n'
     << "p_t2=" << c.p_t2 << '\n'
     << "p_tr=" << c.p_tr << '\n'
     << "p_n1=" << c.p_n1 << '\n'
     << "p_n2=" << c.p_n2 << '\n'
     << "p_nr=" << c.p_nr << '\n'
     << "d2=" << c.d2 << '\n'
     << "nu=" << c.nu << '\n'
     << "white_relay_noise=" << (c.white_relay_noise ? "true" : "false") << '\n'
     << "reciprocal=" << (c.reciprocal ? "true" : "false") << '\n';
  return os.str();
}

ChannelSet draw_channels(const SystemConfig& config, std::uint64_t rng_seed) {
  config.validate();
  Xoshiro256 rng(rng_seed);
  const double var1 = 1.0 / std::pow(config.d1(), config.nu);
  const double var2 = 1.0 / std::pow(config.d2, config.nu);
  ChannelSet ch;
  ch.h1f = draw_cn(rng, config.m_r, var1);
  ch.h2f = draw_cn(rng, config.m_r, var2);
  if (config.reciprocal) {
    ch.h1b = ch.h1f;
    ch.h2b = ch.h2f;
  } else {
    ch.h1b = draw_cn(rng, config.m_r, var1);
    ch.h2b = draw_cn(rng, config.m_r, var2);
  }
  return ch;
}

HermitianMatrix relay_noise_covariance(const SystemConfig& config) {
  if (config.white_relay_noise)
    return HermitianMatrix::identity(config.m_r) * config.p_nr;
  if (!config.relay_noise_cov)
    throw InvalidInput("relay_noise_covariance: colored noise matrix missing");
  return *config.relay_noise_cov;
}

HermitianMatrix relay_rx_covariance(const SystemConfig& config, const ChannelSet& ch) {
  return HermitianMatrix::outer(ch.h1f) * config.p_t1 +
         HermitianMatrix::outer(ch.h2f) * config.p_t2 + relay_noise_covariance(config);
}

}  // namespace afrelay
