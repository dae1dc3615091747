// test_support.hpp - Random generators shared by the property tests

#pragma once

#include "qhe/sampling.hpp"

namespace qhe::test {

using Gen = Sampler;

}  // namespace qhe::test
