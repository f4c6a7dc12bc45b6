#pragma once

#include <cstddef>
#include <vector>

namespace tnls {

// Composite Simpson weights on `nodes` equispaced points with spacing h.
// An odd number of intervals closes with the 3/8 rule on the last three.
std::vector<double> simpson_weights(std::size_t nodes, double h);

}  // namespace tnls
