#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "m2o/channel.hpp"
#include "m2o/errors.hpp"

using namespace m2o;

namespace {

ChannelConfig worked_config() {
  return ChannelConfig{3, {4.0, 9.0}, {4.0, 2.0, 20.0}};
}

}  // namespace

TEST_CASE("validate accepts a well-formed config") {
  const ValidationResult r = validate(worked_config());
  CHECK(r.ok());
  CHECK(r.issues.empty());
}

TEST_CASE("validate reports every issue at once with its field") {
  ChannelConfig config;
  config.K = 2;                 // too small
  config.gains = {-1.0};        // right size for K=2, but negative
  config.powers = {1.0, 0.0};   // right size, second entry not positive
  const ValidationResult r = validate(config);
  REQUIRE(r.issues.size() == 3);

  CHECK(r.issues[0].code == ValidationCode::KTooSmall);
  CHECK(r.issues[0].field == "/K");
  CHECK(r.issues[1].code == ValidationCode::NegativeGain);
  CHECK(r.issues[1].field == "/gains/0");
  CHECK(r.issues[2].code == ValidationCode::NonPositivePower);
  CHECK(r.issues[2].field == "/powers/1");
}

TEST_CASE("validate flags size mismatches against K") {
  ChannelConfig config{3, {1.0}, {1.0, 1.0, 1.0, 1.0}};
  const ValidationResult r = validate(config);
  REQUIRE(r.issues.size() == 2);
  CHECK(r.issues[0].code == ValidationCode::DimensionMismatch);
  CHECK(r.issues[0].field == "/gains");
  CHECK(r.issues[1].code == ValidationCode::DimensionMismatch);
  CHECK(r.issues[1].field == "/powers");
}

TEST_CASE("validate rejects non-finite entries") {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ChannelConfig config{3, {inf, 1.0}, {1.0, nan, 1.0}};
  const ValidationResult r = validate(config);
  REQUIRE(r.issues.size() == 2);
  CHECK(r.issues[0].field == "/gains/0");
  CHECK(r.issues[1].field == "/powers/1");
}

TEST_CASE("require_valid throws ConfigError naming the offending fields") {
  ChannelConfig config{3, {1.0, -2.0}, {1.0, 1.0, -1.0}};
  try {
    require_valid(config);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("/gains/1") != std::string::npos);
    CHECK(msg.find("/powers/2") != std::string::npos);
  }
  CHECK_NOTHROW(require_valid(worked_config()));
}

TEST_CASE("cap matches hand-computed capacities") {
  CHECK(cap(0.0) == 0.0);
  CHECK(cap(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cap(3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cap(20.0) == doctest::Approx(2.19615871138938).epsilon(1e-12));
  CHECK_THROWS_AS(cap(-1e-9), NegativeArgument);
}

TEST_CASE("max_gain_c floors at one") {
  CHECK(max_gain_c(ChannelConfig{3, {0.5, 0.25}, {1, 1, 1}}) == 1.0);
  CHECK(max_gain_c(worked_config()) == 9.0);
}

TEST_CASE("validation code names are stable") {
  CHECK(std::string(validation_code_name(ValidationCode::KTooSmall)) ==
        "KTooSmall");
  CHECK(std::string(validation_code_name(ValidationCode::DimensionMismatch)) ==
        "DimensionMismatch");
  CHECK(std::string(validation_code_name(ValidationCode::NonPositivePower)) ==
        "NonPositivePower");
  CHECK(std::string(validation_code_name(ValidationCode::NegativeGain)) ==
        "NegativeGain");
}

TEST_CASE("error types carry stable names") {
  try {
    cap(-1.0);
  } catch (const Error& e) {
    CHECK(std::string(e.name()) == "NegativeArgument");
  }
}
