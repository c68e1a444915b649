#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "doctest.h"
#include "isospec/error.hpp"

#define CHECK_ERROR(expr, expected_code)                        \
  do {                                                          \
    bool thrown_ = false;                                       \
    try {                                                       \
      (void)(expr);                                             \
    } catch (const isospec::Error& e_) {                        \
      thrown_ = true;                                           \
      CHECK_MESSAGE(e_.code() == (expected_code), e_.what());   \
    }                                                           \
    CHECK_MESSAGE(thrown_, "expected an isospec::Error");       \
  } while (0)

// Distance between two finite doubles in units in the last place.
inline std::int64_t ulp_distance(double a, double b) {
  auto key = [](double x) {
    const auto i = std::bit_cast<std::int64_t>(x);
    return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
  };
  const std::int64_t d = key(a) - key(b);
  return d < 0 ? -d : d;
}
