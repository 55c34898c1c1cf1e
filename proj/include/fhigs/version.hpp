#pragma once

namespace fhigs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fhigs
