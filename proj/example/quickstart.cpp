// Fits the four drivers on a small friedman1 problem and prints test macro-r2.

#include <cstdio>

#include "boostrp/boostrp.hpp"

int main() {
  using namespace boostrp;

  SyntheticSpec spec;
  spec.family = Family::chain;
  spec.n = 300;
  spec.d = 8;
  spec.seed = RngSeed{7};
  const Dataset train = generate(spec);
  spec.n = 2000;
  spec.seed = RngSeed{8};
  const Dataset test = generate(spec);

  for (Variant v : {Variant::single_target, Variant::gbmo, Variant::gb_rpo, Variant::gb_relabel_rpo}) {
    BoostConfig cfg;
    cfg.variant = v;
    cfg.n_stages = 300;
    cfg.learning_rate = 0.1;
    cfg.seed = RngSeed{1};
    const auto result = fit(train, cfg);
    const double r2 = macro_r2(test.targets(), result.model.predict(test.features())).value;
    std::printf("%-16s stages=%zu  test macro-r2=%.4f\n", to_string(v), result.model.stages.size(), r2);
  }
}
