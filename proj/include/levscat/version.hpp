#pragma once

namespace levscat {

inline constexpr const char* kVersion = "0.1.0";

} // namespace levscat
