#pragma once

namespace stmg {

inline constexpr const char* kVersion = "1.0.0";

} // namespace stmg
