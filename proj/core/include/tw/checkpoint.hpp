#pragma once

#include <string>

#include "tw/autodiff.hpp"

namespace tw::ad {

// Binary parameter container: magic + format version, then named blocks of
// (name, rows, cols, row-major IEEE doubles), all little-endian. Round trips
// bit-exactly.
void save_checkpoint(const std::string& path, const NamedParams& params);
NamedParams load_checkpoint(const std::string& path);

// Loads values into an existing parameter list; names, order and shapes must
// match exactly.
void load_checkpoint_into(const std::string& path, const NamedParams& params);

}  // namespace tw::ad
