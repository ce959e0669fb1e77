#pragma once

#include <string>
#include <string_view>

#include "ik/calculus.hpp"

namespace ik {

/// Derivation file: optional signature lines, then one node per line
///
///   <id>: <rule> premises=[ids] payload={key=value; ...} conclusion=<sequent>
///
/// Premises must be defined on earlier lines; the last node is the root.
struct DerivationFile {
  Signature sig;
  DerivationPtr root;
  std::size_t nodes = 0;
};

DerivationFile parse_derivation_file(std::string_view text, ParseOptions opts = {true});

/// Writes `d` with node ids n0, n1, ... in post-order. Shared subderivations
/// are written once.
std::string write_derivation(const Derivation& d, const Signature* sig = nullptr);

std::string print_payload(const Payload& p);

}  // namespace ik
