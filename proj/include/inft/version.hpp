#pragma once

namespace inft {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace inft
