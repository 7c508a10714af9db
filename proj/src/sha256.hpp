#pragma once

#include <string>
#include <string_view>

namespace cashflow {

// FIPS 180-4 SHA-256, returned as a lowercase hex digest. Used for
// content-addressing model artifacts and provenance hashes; self-contained so
// the shared library carries no crypto dependency.
std::string sha256_hex(std::string_view data);

}  // namespace cashflow
