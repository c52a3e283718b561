#pragma once

namespace qbsim {
inline constexpr const char* version = "0.1.0";
}
