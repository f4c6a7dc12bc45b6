#include "tnls/quadrature.hpp"

#include "tnls/types.hpp"

namespace tnls {

std::vector<double> simpson_weights(std::size_t nodes, double h) {
  if (nodes < 3) throw QuadratureError("Simpson quadrature needs at least 3 nodes");
  const std::size_t intervals = nodes - 1;
  std::vector<double> w(nodes, 0.0);
  const std::size_t even = intervals % 2 == 0 ? intervals : intervals - 3;
  for (std::size_t i = 0; i + 2 <= even; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (even != intervals) {
    const std::size_t i = even;
    w[i] += 3.0 * h / 8.0;
    w[i + 1] += 9.0 * h / 8.0;
    w[i + 2] += 9.0 * h / 8.0;
    w[i + 3] += 3.0 * h / 8.0;
  }
  return w;
}

}  // namespace tnls
