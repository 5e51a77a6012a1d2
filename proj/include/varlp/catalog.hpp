#pragma once

#include <string>
#include <vector>

#include "varlp/domain.hpp"
#include "varlp/exponent.hpp"
#include "varlp/sequence.hpp"

namespace varlp {

struct CatalogFunction {
  std::string name;
  FunctionSpec fn;
  std::string provenance;
};

struct CatalogExponent {
  std::string name;
  ExponentFunction p;
  std::string provenance;
};

const std::vector<CatalogFunction>& function_catalog();
const std::vector<CatalogExponent>& exponent_catalog();

// Catalog name, "const:<v>", or "expr:<DSL>".
FunctionSpec parse_function(const std::string& spec);

// "zero", "inv-k", "const:<v>", "unit:<k>", or "expr:<DSL in k>".
SequenceSpec parse_sequence(const std::string& spec);

}  // namespace varlp
