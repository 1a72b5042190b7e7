// Sweep rational magnetic fluxes through the primitive network and print a
// text rendering of the resulting Hofstadter-style band diagram.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <nctorus/nctorus.hpp>

using namespace nct;

int main() {
  const int maxDen = 8;
  const ButterflyResult res = butterfly("P", 12, maxDen, 6);

  // Find the energy window.
  double lo = 0.0, hi = 0.0;
  for (const auto& bf : res.fluxes)
    for (const auto& band : bf.bands) {
      lo = std::min(lo, band.lo);
      hi = std::max(hi, band.hi);
    }

  const int cols = 72;
  std::printf("primitive network butterfly, axis 12, denominators <= %d\n", maxDen);
  std::printf("energy window [%.3f, %.3f], %d columns\n\n", lo, hi, cols);
  for (const auto& bf : res.fluxes) {
    std::string row(cols, ' ');
    for (const auto& band : bf.bands) {
      const int a = static_cast<int>((band.lo - lo) / (hi - lo) * (cols - 1));
      const int b = static_cast<int>((band.hi - lo) / (hi - lo) * (cols - 1));
      for (int i = a; i <= b; ++i) row[static_cast<std::size_t>(i)] = '#';
    }
    std::printf("%5s |%s|  %zu band%s\n", bf.flux.str().c_str(), row.c_str(), bf.bands.size(),
                bf.bands.size() == 1 ? "" : "s");
  }
  return 0;
}
