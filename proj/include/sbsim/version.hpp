// version.hpp

#pragma once

namespace sbsim {

inline constexpr const char* kVersion = "1.0.0";

} // namespace sbsim
