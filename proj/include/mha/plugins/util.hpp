#pragma once

#include <cstddef>
#include <vector>

namespace mha::plugins {

/// Expands a length-1 vector to `n` entries; any other length must equal `n`
/// (VectorLengthMismatch otherwise).
std::vector<double> broadcast(const std::vector<double>& v, std::size_t n, const char* what);

}  // namespace mha::plugins
