#pragma once

#include <gtest/gtest.h>

#include "dcki/common.hpp"

// Statement must throw dcki::Error carrying `expected_code`.
#define EXPECT_DCKI_ERROR(statement, expected_code)                          \
  EXPECT_THROW(                                                              \
      {                                                                      \
        try {                                                                \
          (void)(statement);                                                       \
        } catch (const dcki::Error& dcki_error_) {                           \
          EXPECT_EQ(dcki_error_.code(), expected_code) << dcki_error_.what(); \
          throw;                                                             \
        }                                                                    \
      },                                                                     \
      dcki::Error)
