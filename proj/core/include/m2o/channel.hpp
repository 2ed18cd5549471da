#pragma once

#include <string>
#include <vector>

namespace m2o {

/* Channel model for the K-user Gaussian many-to-one interference network.
 *
 * Receiver K hears every transmitter: user i < K arrives through the real
 * power gain a_i, user K through unit gain, plus Gaussian noise. Receivers
 * 1..K-1 hear only their own transmitter plus noise. Receiver K must decode
 * message K and is simultaneously the party the confidential messages of
 * users 1..K-1 are hidden from. Gains and powers are linear quantities,
 * not dB.
 */
struct ChannelConfig {
  int K = 0;                  // number of transmitter/receiver pairs, >= 3
  std::vector<double> gains;  // a_1..a_{K-1}, cross gains into receiver K, each >= 0
  std::vector<double> powers; // P_1..P_K, per-user power budgets, each > 0
};

struct GaussianNoiseSpec {
  double variance = 1.0;  // per-dimension noise variance, > 0
};

enum class ValidationCode {
  KTooSmall,
  DimensionMismatch,
  NonPositivePower,
  NegativeGain,
};

const char* validation_code_name(ValidationCode code);

struct ValidationIssue {
  ValidationCode code;
  std::string field;    // JSON-pointer style, e.g. "/powers/2"
  std::string message;
};

struct ValidationResult {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks every structural invariant of the config and reports all failures
// at once, one issue per offending field.
ValidationResult validate(const ChannelConfig& config);

// Throws ConfigError listing every issue when the config is invalid.
void require_valid(const ChannelConfig& config);

// Point-to-point Gaussian capacity C(x) = 1/2 log2(1 + x) in bits per use.
// Throws NegativeArgument for x < 0.
double cap(double x);

// c = max{1, a_1, ..., a_{K-1}}, the gain normalizer used by the upper bound.
double max_gain_c(const ChannelConfig& config);

}  // namespace m2o
