#include "mha/plugins/util.hpp"

#include <string>

#include "mha/error.hpp"

namespace mha::plugins {

std::vector<double> broadcast(const std::vector<double>& v, std::size_t n, const char* what) {
  if (v.size() == n) return v;
  if (v.size() == 1) return std::vector<double>(n, v.front());
  throw Error(Errc::VectorLengthMismatch, std::string(what) + " has " + std::to_string(v.size()) +
                                              " entries, expected 1 or " + std::to_string(n));
}

}  // namespace mha::plugins
