#pragma once

namespace plrs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace plrs
