#pragma once

namespace lculab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lculab
