#pragma once

#include <string>

#include "levelshift/error.hpp"
#include "levelshift/types.hpp"

namespace levelshift::detail {

inline void require_same_dim(Index expected, Index actual, const char* what) {
  if (expected != actual) {
    throw Error(ErrorCode::dimension_mismatch,
                std::string(what) + ": expected dimension " +
                    std::to_string(expected) + ", got " + std::to_string(actual));
  }
}

}  // namespace levelshift::detail
