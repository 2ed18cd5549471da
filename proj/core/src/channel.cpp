#include "m2o/channel.hpp"

#include <cmath>
#include <sstream>

#include "m2o/errors.hpp"

namespace m2o {

const char* validation_code_name(ValidationCode code) {
  switch (code) {
    case ValidationCode::KTooSmall: return "KTooSmall";
    case ValidationCode::DimensionMismatch: return "DimensionMismatch";
    case ValidationCode::NonPositivePower: return "NonPositivePower";
    case ValidationCode::NegativeGain: return "NegativeGain";
  }
  return "Unknown";
}

ValidationResult validate(const ChannelConfig& config) {
  ValidationResult result;
  auto add = [&result](ValidationCode code, std::string field, std::string msg) {
    result.issues.push_back({code, std::move(field), std::move(msg)});
  };

  if (config.K < 3) {
    add(ValidationCode::KTooSmall, "/K",
        "K must be at least 3, got " + std::to_string(config.K));
  }
  const auto expect_gains = static_cast<std::size_t>(config.K > 0 ? config.K - 1 : 0);
  if (config.gains.size() != expect_gains) {
    add(ValidationCode::DimensionMismatch, "/gains",
        "expected " + std::to_string(expect_gains) + " gains (K-1), got " +
            std::to_string(config.gains.size()));
  }
  const auto expect_powers = static_cast<std::size_t>(config.K > 0 ? config.K : 0);
  if (config.powers.size() != expect_powers) {
    add(ValidationCode::DimensionMismatch, "/powers",
        "expected " + std::to_string(expect_powers) + " powers (K), got " +
            std::to_string(config.powers.size()));
  }
  for (std::size_t i = 0; i < config.gains.size(); ++i) {
    const double a = config.gains[i];
    if (!(a >= 0.0) || !std::isfinite(a)) {
      add(ValidationCode::NegativeGain, "/gains/" + std::to_string(i),
          "gains must be finite and >= 0");
    }
  }
  for (std::size_t i = 0; i < config.powers.size(); ++i) {
    const double p = config.powers[i];
    if (!(p > 0.0) || !std::isfinite(p)) {
      add(ValidationCode::NonPositivePower, "/powers/" + std::to_string(i),
          "powers must be finite and > 0");
    }
  }
  return result;
}

void require_valid(const ChannelConfig& config) {
  const ValidationResult result = validate(config);
  if (result.ok()) return;
  std::ostringstream msg;
  msg << "invalid channel config:";
  for (const auto& issue : result.issues) {
    msg << " [" << issue.field << "] " << issue.message << ";";
  }
  throw ConfigError(msg.str());
}

double cap(double x) {
  if (!(x >= 0.0)) {
    throw NegativeArgument("cap(x) requires x >= 0, got " + std::to_string(x));
  }
  return 0.5 * std::log2(1.0 + x);
}

double max_gain_c(const ChannelConfig& config) {
  double c = 1.0;
  for (const double a : config.gains) c = std::max(c, a);
  return c;
}

}  // namespace m2o
