#pragma once

namespace lamcert {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kFormatVersion = "1";

}  // namespace lamcert
