#ifndef STABCHECK_BIGINT_HPP
#define STABCHECK_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace stabcheck {

/// Arbitrary-precision integer used as the fallback scalar wherever 64-bit
/// elimination could overflow. Header-only; never linked.
using BigInt = boost::multiprecision::cpp_int;

}  // namespace stabcheck

#endif  // STABCHECK_BIGINT_HPP
