#pragma once

namespace helsteiner {

inline constexpr const char* library_version = "0.1.0";

}  // namespace helsteiner
