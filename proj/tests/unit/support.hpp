#pragma once

#include <functional>

#include <gtest/gtest.h>

#include "qmelab/errors.hpp"
#include "qmelab/superop.hpp"

namespace qmelab::proptest {

inline void expect_code(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

inline double maxdiff(const Mat4& a, const Mat4& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double maxdiff(const Mat3& a, const Mat3& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double maxdiff(const SuperOp& a, const SuperOp& b) { return maxdiff(a.matrix(), b.matrix()); }

}  // namespace qmelab::proptest
