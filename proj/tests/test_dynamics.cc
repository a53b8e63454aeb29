#include <doctest.h>

#include <set>

#include "gamedyn/dynamics.h"
#include "gamedyn/game.h"
#include "toy.h"

using namespace gamedyn;

TEST_CASE("toy SBRD from (0,1) is a two-cycle") {
  const DynOutcome out = run_sbrd(toy_game(), {0, 1}, 100, true);
  CHECK(out.is_two_cycle());
  REQUIRE(out.members.size() == 2);
  CHECK(out.members[0] == ActionProfile{0, 1});
  CHECK(out.members[1] == ActionProfile{1, 0});
  CHECK(out.steps_to_terminal == 2);
  REQUIRE(out.trajectory);
  CHECK(out.trajectory->size() == 3);
  CHECK(cross_profiles_are_nash(toy_game(), out));
  CHECK(std::string(terminal_kind_name(out.kind)) == "CYCLE");
}

TEST_CASE("toy SBRD from (1,1) is a fixed point after one step") {
  const DynOutcome out = run_sbrd(toy_game(), {1, 1}, 100);
  CHECK(out.is_fixed_point());
  CHECK(out.cycle_length == 1);
  CHECK(out.steps_to_terminal == 1);
  CHECK(out.members == std::vector<ActionProfile>{{1, 1}});
  CHECK_FALSE(out.trajectory.has_value());
}

TEST_CASE("single-action SBRD is a fixed point") {
  const Game g = Game::from_tables(2, 1, {{0.3}, {0.1}});
  const DynOutcome out = run_sbrd(g, {0, 0}, 10);
  CHECK(out.is_fixed_point());
  CHECK(out.members.front() == ActionProfile{0, 0});
}

TEST_CASE("SBRD truncation") {
  const DynOutcome out = run_sbrd(toy_game(), {0, 1}, 1);
  CHECK(out.kind == TerminalKind::kTruncated);
  CHECK(out.cycle_length == 0);
  CHECK(out.steps_to_terminal == 1);
}

TEST_CASE("default max steps") {
  CHECK(default_max_steps(toy_game()) == 5);
  CHECK(default_max_steps(sample_game({3, 50, 1.0, 0})) == 100000);
}

TEST_CASE("INDD preconditions") {
  CHECK_THROWS_AS(run_indd(toy_game(), {0, 0}, 10), std::invalid_argument);
  const Game three = sample_game({3, 4, 1.0, 0});
  CHECK_THROWS_AS(run_indd(three, {0, 0, 0}, 10), ArityError);
  CHECK_THROWS_AS(compare_sbrd_indd(three, {0, 0, 0}, 10), ArityError);
  const DynOutcome cyc = run_sbrd(toy_game(), {1, 1}, 10);
  CHECK_THROWS_AS(cross_profiles_are_nash(toy_game(), cyc), ArityError);
}

TEST_CASE("INDD history eligibility") {
  InddHistory h(4, {0, 1});
  CHECK_FALSE(h.eligible(0, 0));
  CHECK(h.eligible(0, 1));
  CHECK_FALSE(h.eligible(1, 1));
  h.advance({2, 3});
  // t = 2: the action from t = 0 may come back, the one from t = 1 may not.
  CHECK(h.eligible(0, 0));
  CHECK_FALSE(h.eligible(0, 2));
  CHECK(h.eligible(0, 3));
  CHECK(h.eligible(1, 1));
  CHECK_FALSE(h.eligible(1, 3));
  h.advance({3, 0});
  CHECK(h.eligible(0, 2));
  CHECK_FALSE(h.eligible(0, 0));
  CHECK(h.time() == 2);
  CHECK(h.played(0) == std::vector<int>{0, 2, 3});
}

TEST_CASE("hand-built m=3 potential game: INDD two-cycle agreeing with SBRD") {
  // Rows a, columns b. Global max at (2,2), off the start row and column.
  // psi = [[0, 5, 1],
  //        [4, 2, 3],
  //        [1, 6, 9]]
  const Game g = Game::from_potential(2, 3, {0, 5, 1, 4, 2, 3, 1, 6, 9});
  // SBRD from (0,0): a1 = argmax col 0 = 1, b1 = argmax row 0 = 1 -> (1,1)
  // (1,1): a = argmax col 1 = 2, b = argmax row 1 = 0 -> (2,0)
  // (2,0): a = argmax col 0 = 1, b = argmax row 2 = 2 -> (1,2)
  // (1,2): a = argmax col 2 = 2, b = argmax row 1 = 0 -> (2,0), a repeat.
  const DynOutcome sbrd = run_sbrd(g, {0, 0}, 100, true);
  CHECK(sbrd.is_two_cycle());
  CHECK(sbrd.steps_to_terminal == 4);
  CHECK(sbrd.members == std::vector<ActionProfile>{{2, 0}, {1, 2}});
  CHECK(cross_profiles_are_nash(g, sbrd));
  const DynOutcome indd = run_indd(g, {0, 0}, 100, true);
  CHECK(indd.is_two_cycle());
  CHECK(indd.steps_to_terminal == 4);
  const AgreementReport rep = compare_sbrd_indd(g, {0, 0}, 100);
  CHECK(rep.coincide);
  CHECK_FALSE(rep.divergence_time.has_value());
  CHECK(rep.indd_termination_time == 4);
}

TEST_CASE("SBRD fixed point implies disagreement with INDD") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Game g = sample_game({2, 20, 1.0, seed});
    const DynOutcome sbrd = run_sbrd(g, {0, 0}, default_max_steps(g));
    if (!sbrd.is_fixed_point()) continue;
    const AgreementReport rep = compare_sbrd_indd(g, {0, 0}, default_max_steps(g));
    CHECK_FALSE(rep.coincide);
    CHECK(rep.divergence_time.has_value());
  }
}

TEST_CASE("property: SBRD outcomes are sound and reproducible") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const int m = n == 4 ? 5 : 8;
    const Game g = sample_game({n, m, (seed % 4) / 3.0, seed});
    const ActionProfile start(n, static_cast<int>(seed % m));
    const DynOutcome out = run_sbrd(g, start, default_max_steps(g), true);
    const DynOutcome again = run_sbrd(g, start, default_max_steps(g), true);
    CHECK(out.members == again.members);
    CHECK(out.steps_to_terminal == again.steps_to_terminal);
    REQUIRE(out.kind != TerminalKind::kTruncated);
    if (out.is_fixed_point()) CHECK(is_pure_nash(g, out.members.front()));
    std::set<std::uint64_t> distinct;
    for (const auto& p : out.members) distinct.insert(g.profile_index(p));
    CHECK(distinct.size() == out.members.size());
    CHECK(static_cast<int>(out.members.size()) == out.cycle_length);
    for (std::size_t k = 0; k < out.members.size(); ++k) {
      const auto next = sbrd_step(g, g.profile_index(out.members[k]));
      CHECK(next == g.profile_index(out.members[(k + 1) % out.members.size()]));
    }
    std::set<std::uint64_t> visited;
    for (const auto& p : *out.trajectory) visited.insert(g.profile_index(p));
    CHECK(out.steps_to_terminal <= static_cast<std::int64_t>(visited.size()) + 1);
    CHECK(static_cast<std::uint64_t>(out.steps_to_terminal) <= g.num_profiles() + 1);
  }
}

TEST_CASE("property: two-player potential SBRD ends in a fixed point or two-cycle") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Game g = sample_game({2, 30, 1.0, seed});
    const DynOutcome out = run_sbrd(g, {0, 0}, default_max_steps(g));
    CHECK((out.is_fixed_point() || out.is_two_cycle()));
    if (out.is_two_cycle()) CHECK(cross_profiles_are_nash(g, out));
  }
}

TEST_CASE("property: INDD histories respect the replay rule and end in two-cycles") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Game g = sample_game({2, 40, (seed % 3) / 2.0, seed});
    const DynOutcome out = run_indd(g, {0, 0}, default_max_steps(g), true);
    CHECK(out.is_two_cycle());
    const auto& traj = *out.trajectory;
    for (int i = 0; i < 2; ++i) {
      for (std::size_t t = 1; t < traj.size(); ++t) {
        for (std::size_t tau = 0; tau < t; ++tau) {
          if (traj[t][i] == traj[tau][i]) CHECK((t >= 2 && traj[t][i] == traj[t - 2][i]));
        }
      }
    }
  }
}
