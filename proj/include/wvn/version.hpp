#ifndef WVN_VERSION_HPP
#define WVN_VERSION_HPP

namespace wvn {
inline constexpr const char* version = "0.1.0";
}

#endif
