// Prints the median mechanism's ratio on the singleton/group family and the
// uniform-statistic lottery on the same instances.

#include <iostream>

#include "tic/tic.hpp"

int main() {
  tic::Mechanism median = tic::make_median();
  tic::Mechanism uniform = tic::make_uniform_statistic();
  for (std::size_t n : {6, 12, 24, 60}) {
    tic::Instance inst = tic::gen::wci2(n);
    auto m = tic::approximation_ratio(median, inst);
    auto u = tic::approximation_ratio(uniform, inst);
    std::cout << "n=" << n << "  median " << m.ratio.to_string() << " (" << m.ratio.value().to_decimal() << ")"
              << "  uniform-statistic " << u.ratio.to_string() << "\n";
  }
}
