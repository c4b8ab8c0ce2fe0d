// Error hierarchy shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace gjet {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define GJET_DEFINE_ERROR(NAME)                                 \
  struct NAME : Error {                                         \
    explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {} \
  }

GJET_DEFINE_ERROR(DivisionNearZero);
GJET_DEFINE_ERROR(DimensionMismatch);
GJET_DEFINE_ERROR(GroupMismatch);
GJET_DEFINE_ERROR(SingularMatrix);
GJET_DEFINE_ERROR(FiberMismatch);
GJET_DEFINE_ERROR(ComposabilityError);
GJET_DEFINE_ERROR(NotSemiholonomous);
GJET_DEFINE_ERROR(BasePointMismatch);
GJET_DEFINE_ERROR(FirstJetMismatch);
GJET_DEFINE_ERROR(DegenerateBisection);
GJET_DEFINE_ERROR(ConfigError);
GJET_DEFINE_ERROR(ConventionUnpinned);
GJET_DEFINE_ERROR(IoError);

#undef GJET_DEFINE_ERROR

}  // namespace gjet
