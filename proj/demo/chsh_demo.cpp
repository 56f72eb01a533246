// Walks CHSH through every solver: local bound, classical game bound,
// entangled see-saw, the prepare-and-measure construction and the
// prepare-and-measure see-saw.

#include <cstdio>

#include "bellcc/bellcc.hpp"

int main() {
  using namespace bellcc;
  const BellFunctional f = chsh();
  const CcpGame game = build_game(f);

  const BellBound bb = bell_bound(f);
  std::printf("local bound            %.9f\n", bb.value);
  std::printf("classical game bound   %.9f\n", ccp_bound_general(game).value);

  const SeesawBellResult sb = seesaw_bell(f, 2, 2);
  std::printf("entangled (see-saw)    %.9f\n", sb.value);

  const PtmFromBell pf = ptm_from_bell(game, sb.rho, sb.A, 1e-6);
  std::printf("mapped to qubit code   %.9f\n", ptm_value(game, pf.prep, sb.B));
  std::printf("qubit code (see-saw)   %.9f\n", seesaw_ptm(game).value);
  return 0;
}
