#pragma once

#include <variant>

#include "delaystab/model_config.hpp"

namespace dstest {

/// The bundled two-neuron periodic Hopfield model.
inline delaystab::HopfieldSpec example_spec() {
  return std::get<delaystab::HopfieldSpec>(delaystab::parse_model_config(delaystab::example_model_json()));
}

}  // namespace dstest
