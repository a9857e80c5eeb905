#pragma once

#include <stdexcept>

namespace lrc {

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace lrc
