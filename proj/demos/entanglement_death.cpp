// Track the entanglement of the shared pair while it sits in each
// environment.  The noisy channel kills the concurrence at a finite
// exposure; the other two only damp it exponentially.

#include <cstdio>

#include "telesim/telesim.hpp"

namespace ts = telesim;
using ts::EnvironmentKind;

int main() {
  const double gamma = 1.0;
  const EnvironmentKind kinds[3] = {EnvironmentKind::dissipative, EnvironmentKind::noisy,
                                    EnvironmentKind::dephasing};

  std::printf("concurrence of the shared pair, gamma = %g\n\n", gamma);
  std::printf("%8s %14s %14s %14s\n", "t0", "C(di)", "C(no)", "C(de)");
  for (int i = 0; i <= 16; ++i) {
    const double t0 = 0.05 * i;
    std::printf("%8.2f", t0);
    for (const auto kind : kinds)
      std::printf(" %14.10f", ts::concurrence(ts::channel_state_closed(kind, gamma, t0).rho));
    std::printf("\n");
  }

  std::printf("\nsudden-death exposure:\n");
  for (const auto kind : kinds) {
    const auto death = ts::esd_time(kind, gamma);
    if (death)
      std::printf("  %-12s gamma*t0 = %.6f\n", ts::to_string(kind), gamma * *death);
    else
      std::printf("  %-12s never dies, decay only\n", ts::to_string(kind));
  }
  return 0;
}
