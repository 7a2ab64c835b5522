#pragma once

#include <doctest.h>

#include "scenechain/error.hpp"

// Runs fn and returns the error code it threw; fails the test if nothing was thrown.
template <typename Fn>
scenechain::ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const scenechain::Error& e) {
    return e.code();
  }
  FAIL("expected a scenechain::Error");
  return scenechain::ErrorCode::Io;
}

#define CHECK_ERROR_CODE(expr, expected_code) CHECK(error_code_of([&] { (void)(expr); }) == (expected_code))
