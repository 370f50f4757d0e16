#ifndef WVN_EXTENDED_HPP
#define WVN_EXTENDED_HPP

// Extended-precision scalar (50 significant decimal digits) for recursion
// evaluations near removable singularities, where the reduction identities
// cancel catastrophically in double.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "wvn/recursion.hpp"

namespace wvn {

using real_x = boost::multiprecision::cpp_bin_float_50;
using complex_x = boost::multiprecision::cpp_complex_50;

template <>
struct complex_for<real_x> {
    using type = complex_x;
};

using recursion_engine_x = basic_recursion_engine<real_x>;

} // namespace wvn

#endif
