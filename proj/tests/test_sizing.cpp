#include <doctest.h>

#include <cmath>

#include "gfa/channel.hpp"
#include "gfa/errors.hpp"
#include "gfa/mg1.hpp"
#include "gfa/sizing.hpp"

using namespace gfa;

namespace {
const ChannelParams kSecV = ChannelParams::from_dbm(-112.0, -60.0, 4.0);

double outage_at(const SystemParams& base, int b, SizingModel model) {
  SystemParams sys = base;
  sys.n_rbs = b;
  try {
    switch (model) {
      case SizingModel::no_1pr:
        return outage(delay_no_1pr(sys, kSecV), 7.0);
      case SizingModel::no_queue:
        return outage(delay_no_queue(solve_simplified(sys, kSecV)), 7.0);
      default:
        return outage(delay_distribution(solve_simplified(sys, kSecV), sys), 7.0);
    }
  } catch (const Error&) {
    return 1.0;
  }
}
}  // namespace

TEST_CASE("find_b_star returns the minimal feasible B") {
  SystemParams sys(40, 48, 5.0);
  for (SizingModel model : {SizingModel::no_queue, SizingModel::no_1pr, SizingModel::full}) {
    SizingSpec spec;
    spec.model = model;
    const BStarResult res = find_b_star(sys, kSecV, spec);
    REQUIRE(res.feasible());
    CAPTURE(to_string(model));
    const int b = *res.b_star;
    CHECK(outage_at(sys, b, model) <= spec.outage_target);
    CHECK(outage_at(sys, b - 1, model) > spec.outage_target);
    CHECK(res.outage_at_b_star == doctest::Approx(outage_at(sys, b, model)).epsilon(1e-12));
  }
}

TEST_CASE("model ordering at the reference sizing parameters") {
  SystemParams sys(60, 48, 5.0);
  SizingSpec spec;
  spec.model = SizingModel::no_1pr;
  const int b_no1pr = *find_b_star(sys, kSecV, spec).b_star;
  spec.model = SizingModel::no_queue;
  const int b_nq = *find_b_star(sys, kSecV, spec).b_star;
  spec.model = SizingModel::full;
  const int b_full = *find_b_star(sys, kSecV, spec).b_star;
  CHECK(b_no1pr <= b_nq);
  CHECK(b_nq <= b_full);
}

TEST_CASE("lambda = 10/s cannot be provisioned") {
  SystemParams sys(40, 48, 10.0);
  SizingSpec spec;
  spec.b_max = 300;
  const BStarResult res = find_b_star(sys, kSecV, spec);
  CHECK_FALSE(res.feasible());
  CHECK_FALSE(res.reason.empty());
}

TEST_CASE("b_star_table is monotone in N and preserves infeasible rows") {
  SystemParams sys(40, 48, 5.0);
  SizingSpec spec;
  const auto table = b_star_table({40, 60}, sys, kSecV, spec);
  REQUIRE(table.size() == 2);
  REQUIRE(table[0].result.feasible());
  REQUIRE(table[1].result.feasible());
  CHECK(*table[0].result.b_star <= *table[1].result.b_star);
  CHECK(table[0].n_ues == 40);
}

TEST_CASE("bad sizing specs are rejected") {
  SystemParams sys(40, 48, 5.0);
  SizingSpec spec;
  spec.outage_target = 0.0;
  CHECK_THROWS_AS(find_b_star(sys, kSecV, spec), Error);
  SizingSpec spec2;
  spec2.b_step = 0;
  CHECK_THROWS_AS(find_b_star(sys, kSecV, spec2), Error);
  CHECK_THROWS_AS(b_star_table({}, sys, kSecV, SizingSpec{}), Error);
}
