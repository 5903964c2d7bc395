#pragma once

#include <stdexcept>
#include <string>

#include "ehtcp/problem.hpp"

namespace ehtcp {

/// Schema/validation failure with a field-path diagnostic.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the JSON instance format:
///   {"m":3,"n":2,"k":2,
///    "tensors":[{"entries":[[[1,2,2],1.0],[[2,1,1],1.0]]}, ...],
///    "d":[[1.0,1.0]], "q":[1.0,0.0], "label":"..."}
/// Index tuples are 1-based. "d" may be omitted (or empty) when k = 1;
/// "q" defaults to the zero vector; "label" is optional. Validation
/// failures (nonpositive d, out-of-range indices, duplicate tuples, shape
/// mismatches) throw ParseError naming the offending field.
EhtcpInstance parse_instance(const std::string& text);

/// Canonical serialization: entries in lexicographic index order, 1-based
/// tuples. parse_instance(serialize_instance(inst)) reproduces the instance
/// bit-exactly.
std::string serialize_instance(const EhtcpInstance& inst);

EhtcpInstance load_instance(const std::string& path);
void save_instance(const EhtcpInstance& inst, const std::string& path);

}  // namespace ehtcp
