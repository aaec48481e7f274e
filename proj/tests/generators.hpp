#pragma once

#include "multiorder/generators.hpp"
#include "oracles.hpp"

namespace multiorder::testing {
using namespace multiorder::gen;
}  // namespace multiorder::testing
