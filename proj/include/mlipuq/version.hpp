#pragma once

namespace mlipuq {

inline constexpr const char *kVersion = "0.1.0";

}  // namespace mlipuq
