// SPDX-License-Identifier: Apache-2.0
//
// System configuration and Rayleigh channel realizations for a two-way relay
// with two single-antenna terminals and an m_r-antenna amplify-and-forward relay.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "afrelay/linalg.hpp"

namespace afrelay {

struct SystemConfig {
  int m_r = 3;             ///< relay antennas
  double p_t1 = 1.0;       ///< terminal transmit powers (linear)
  double p_t2 = 1.0;
  double p_tr = 1.0;       ///< relay power budget
  double p_n1 = 1.0;       ///< terminal noise powers
  double p_n2 = 1.0;
  double p_nr = 1.0;       ///< relay noise power per antenna
  double d2 = 0.5;         ///< relay to terminal-2 distance, d1 = 1 - d2
  double nu = 3.0;         ///< path-loss exponent
  bool white_relay_noise = true;
  bool reciprocal = true;
  /// Relay noise covariance used when white_relay_noise is false.
  std::optional<HermitianMatrix> relay_noise_cov;

  double d1() const { return 1.0 - d2; }

  /// Throws InvalidInput on out-of-range fields.
  void validate() const;
};

/// Loads a flat key=value file; keys are the field names above. Blank lines and
/// text after '#' are ignored. Unknown keys are an error.
SystemConfig parse_config(std::istream& in);
SystemConfig load_config(const std::string& path);
std::string to_string(const SystemConfig& c);

struct ChannelSet {
  ComplexVector h1f, h2f;  ///< terminal -> relay
  ComplexVector h1b, h2b;  ///< relay -> terminal
};

/// Entries are CN(0, 1/d_i^nu). Backward channels equal the forward ones when
/// the config is reciprocal, otherwise they are drawn independently.
ChannelSet draw_channels(const SystemConfig& config, std::uint64_t rng_seed);

/// R_{N,R}: p_nr * I for white noise, otherwise config.relay_noise_cov.
HermitianMatrix relay_noise_covariance(const SystemConfig& config);

/// R_R = h1f h1f^H p_t1 + h2f h2f^H p_t2 + R_{N,R}
HermitianMatrix relay_rx_covariance(const SystemConfig& config, const ChannelSet& ch);

}  // namespace afrelay
