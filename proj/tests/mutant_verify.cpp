// Built with PTRES_MUTATE_G_RATIO_SIGN: the self-check suite must notice the
// sign flip through the jump identities or the oracle comparisons.

#include <cstdio>

#include "ptres/verify.hpp"

int main() {
  int caught = 0;
  for (const auto& r : ptres::verify::run(ptres::verify::Level::fast))
    if (!r.pass) {
      std::printf("caught by %s/%s (measured %g, threshold %g)\n", r.module.c_str(), r.name.c_str(), r.measured, r.threshold);
      caught += r.module == "greens" || r.module == "oracle";
    }
  if (!caught) std::printf("sign flip in g_ratio went unnoticed\n");
  return caught ? 0 : 1;
}
