#pragma once

namespace qwalk {

inline constexpr const char* version = "0.1.0";

}  // namespace qwalk
