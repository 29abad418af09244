#pragma once

namespace aspectlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace aspectlab
