#pragma once

namespace m2o {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace m2o
