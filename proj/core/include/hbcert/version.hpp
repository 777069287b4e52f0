#ifndef HBCERT_VERSION_HPP
#define HBCERT_VERSION_HPP

namespace hbcert {

inline constexpr const char* kToolName = "hbcert";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace hbcert

#endif
