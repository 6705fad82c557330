#pragma once

#include <optional>

#include "seashark/error.hpp"

/// Code of the seashark::Error thrown by `fn`, or nothing if it returned.
template <typename F>
std::optional<seashark::ErrorCode> error_code(F&& fn) {
  try {
    fn();
  } catch (const seashark::Error& e) {
    return e.code();
  }
  return std::nullopt;
}
