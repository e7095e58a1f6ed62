#pragma once

#include <gtest/gtest.h>

#include <functional>

#include "robin_nls/types.hpp"

namespace robin_nls::testing {

inline ::testing::AssertionResult fails_with(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.kind() == kind) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "threw " << to_string(e.kind()) << ": " << e.what();
  }
  return ::testing::AssertionFailure() << "did not throw";
}

}  // namespace robin_nls::testing
