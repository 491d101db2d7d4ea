#include <doctest.h>

#include "oracles.hpp"
#include "oranits/schedule_eval.hpp"

using namespace oranits;

namespace {

// Example row with Z = 26, K* = 5: m1 -> <2,1>, m2 -> <5,2>, m3 -> <3,1>,
// m26 -> <4,6>; the remaining slots fill the free positions in id order.
AssignmentSolution example_row() {
  AssignmentSolution d(26);
  d[0] = {2, 1};
  d[1] = {5, 2};
  d[2] = {3, 1};
  d[25] = {4, 6};
  const auto quotas = vehicle_quotas(26, 5);
  std::size_t next = 3;
  for (int k = 1; k <= 5; ++k) {
    for (int o = 1; o <= quotas[static_cast<std::size_t>(k - 1)]; ++o) {
      bool used = false;
      for (const auto& a : d.slots) used = used || (a.vehicle == k && a.order == o);
      if (used) continue;
      d[next++] = {k, o};
    }
  }
  REQUIRE(next == 25);
  return d;
}

bool has(const std::vector<Violation>& vs, Constraint c) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.constraint == c; });
}

}  // namespace

TEST_CASE("quotas follow the ceiling split") {
  CHECK(vehicle_quotas(26, 5) == std::vector<int>{6, 6, 6, 6, 2});
  CHECK(vehicle_quotas(25, 5) == std::vector<int>{5, 5, 5, 5, 5});
  CHECK(vehicle_quotas(6, 2) == std::vector<int>{3, 3});
  CHECK(vehicle_quotas(7, 4) == std::vector<int>{2, 2, 2, 1});
  CHECK(vehicle_quotas(0, 3) == std::vector<int>{0, 0, 0});
  for (int z = 0; z < 60; ++z)
    for (int k = 1; k < 12; ++k) {
      const auto q = vehicle_quotas(z, k);
      CHECK(std::accumulate(q.begin(), q.end(), 0) == z);
    }
}

TEST_CASE("example row schedules") {
  const auto d = example_row();
  CHECK(validate(d, std::vector<std::vector<int>>(26), 5).empty());
  const auto s = derive_vehicle_schedules(d);
  REQUIRE(s.size() == 5);
  CHECK(s[1].vehicle == 2);
  CHECK(s[1].missions.front() == 0);
  CHECK(s[4].vehicle == 5);
  CHECK(s[4].missions.size() == 2);
  CHECK(s[4].missions.back() == 1);
  CHECK(s[2].missions.front() == 2);
  CHECK(s[3].missions.back() == 25);
  for (const auto& v : s)
    for (std::size_t t = 1; t < v.missions.size(); ++t)
      CHECK(d[static_cast<std::size_t>(v.missions[t - 1])].order < d[static_cast<std::size_t>(v.missions[t])].order);
}

TEST_CASE("schedule derivation edge cases") {
  AssignmentSolution one(5);
  for (int i = 0; i < 5; ++i) one[static_cast<std::size_t>(i)] = {1, 5 - i};
  const auto s = derive_vehicle_schedules(one);
  REQUIRE(s.size() == 1);
  CHECK(s[0].missions == std::vector<int>{4, 3, 2, 1, 0});

  CHECK(derive_vehicle_schedules(AssignmentSolution{}).empty());
  CHECK_THROWS_AS(derive_vehicle_schedules(AssignmentSolution{{1, 1}, {1, 1}}), DuplicateOrder);
}

TEST_CASE("validation reports each violated constraint") {
  const std::vector<std::vector<int>> none(2);
  const auto dup = validate(AssignmentSolution{{1, 1}, {1, 1}}, none, 1);
  CHECK(has(dup, Constraint::DistinctOrder));

  std::vector<std::vector<int>> chain{{}, {0}};
  const auto inv = validate(AssignmentSolution{{1, 2}, {1, 1}}, chain, 1);
  CHECK(has(inv, Constraint::Precedence));
  CHECK_FALSE(has(inv, Constraint::DistinctOrder));
  CHECK(validate(AssignmentSolution{{1, 1}, {1, 2}}, chain, 1).empty());

  CHECK(has(validate(AssignmentSolution{{0, 1}, {1, 1}}, none, 1), Constraint::SingleVehicle));
  CHECK(has(validate(AssignmentSolution{{3, 1}, {1, 1}}, none, 2), Constraint::SingleVehicle));
  CHECK(has(validate(AssignmentSolution{{1, 3}, {1, 1}}, none, 1), Constraint::SingleOrder));
  CHECK(has(validate(AssignmentSolution{{1, 1}, {1, 2}}, none, 2), Constraint::VehicleQuota));
  CHECK(structurally_valid(AssignmentSolution{{1, 1}, {1, 2}}, 2));
  CHECK_FALSE(structurally_valid(AssignmentSolution{{1, 1}, {1, 1}}, 2));
}

TEST_CASE("isolated delay components") {
  RoadGraph g({Point(0, 0), Point(500, 0), Point(1000, 0)});
  g.add_edge(0, 1, 500.0, TrafficStatus::FreeFlow);
  g.add_edge(1, 2, 500.0, TrafficStatus::FreeFlow);
  VehicleProfile v;
  v.v_max = 20.0;
  v.v_avg = 20.0;
  Server c;
  c.id = 0;
  c.kind = ServerKind::Cloud;
  c.capacity_hz = 1e9;
  Server m;
  m.id = 1;
  m.position = Point(500, 0);
  m.capacity_hz = 4e9;
  const std::vector<Server> servers{m, c};
  RadioUnit ru;
  ru.position = Point(500, 10);
  const std::vector<RadioUnit> rus{ru};

  Mission empty;
  empty.start_node = 0;
  empty.end_node = 2;
  Rng rng(1);
  const auto e = isolated_delay(empty, g, v, servers, rus, RadioParams{}, rng);
  CHECK(e.move_s == 50.0);
  CHECK(e.comm_s == 0.0);
  CHECK(e.comp_s == 0.0);
  CHECK(e.total_s == 50.0);

  Mission two = empty;
  two.tasks = {{2e6, 1e9}, {5e6, 3e9}};
  const auto route = shortest_route(g, 0, 2);
  Rng r1(9), r2(9);
  const auto d = isolated_delay(two, route, g, v, servers, rus, RadioParams{}, r1);
  // Same stream, same stops: tasks at route nodes floor(0.25*3)=0 and floor(0.75*3)=2.
  VehicleProfile at = v;
  at.position = g.node(0);
  const auto o1 = greedy_offload(at, two.tasks[0], servers, rus, RadioParams{}, r2);
  at.position = g.node(2);
  const auto o2 = greedy_offload(at, two.tasks[1], servers, rus, RadioParams{}, r2);
  CHECK(d.comm_s == doctest::Approx(o1.comm_s + o2.comm_s).epsilon(1e-14));
  CHECK(d.comp_s == doctest::Approx(o1.comp_s + o2.comp_s).epsilon(1e-14));
  CHECK(d.offload_cost == doctest::Approx(o1.cost + o2.cost).epsilon(1e-14));
  CHECK(d.total_s == doctest::Approx(d.move_s + d.comm_s + d.comp_s).epsilon(1e-15));

  g.set_status(0, TrafficStatus::Congested);
  Rng r3(9);
  CHECK(isolated_delay(empty, g, v, servers, rus, RadioParams{}, r3).move_s == doctest::Approx((500.0 * 2.5 + 500.0) / 20.0));
}

TEST_CASE("completion time bound by hand") {
  const std::vector<std::vector<int>> no_preds(2);
  const auto solo = mct_bound(AssignmentSolution{{1, 1}, {2, 1}}, {3.0, 4.0}, no_preds);
  CHECK(solo == std::vector<double>{3.0, 4.0});
  const auto queue = mct_bound(AssignmentSolution{{1, 1}, {1, 2}}, {3.0, 4.0}, no_preds);
  CHECK(queue[1] == 7.0);

  // Z = 4: vehicle 1 runs m0 then m1, vehicle 2 runs m2 then m3; m3 waits on m1.
  const AssignmentSolution d{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  const std::vector<double> delay{2.0, 3.0, 5.0, 7.0};
  const std::vector<std::vector<int>> preds{{}, {}, {}, {1}};
  const auto got = mct_bound(d, delay, preds);
  const auto want = oracle::mct_terms(d, delay, preds);
  CHECK(got == want);
  CHECK(got[3] == 7.0 + 5.0 + (3.0 + 2.0));

  CHECK(mct_bound(AssignmentSolution{{0, 0}, {1, 1}}, {1.0, 1.0}, no_preds)[0] == kNeverCompletes);
}

TEST_CASE("completion time bound matches the term oracle on random rows") {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int z = std::uniform_int_distribution<int>(1, 12)(rng);
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    AssignmentSolution d(static_cast<std::size_t>(z));
    std::vector<double> delay;
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(z));
    for (int i = 0; i < z; ++i) {
      d[static_cast<std::size_t>(i)] = {std::uniform_int_distribution<int>(1, k)(rng), std::uniform_int_distribution<int>(1, z)(rng)};
      delay.push_back(std::uniform_real_distribution<double>(0.5, 9.0)(rng));
      for (int j = 0; j < z; ++j)
        if (j != i && std::bernoulli_distribution(0.15)(rng)) preds[static_cast<std::size_t>(i)].push_back(j);
    }
    const auto got = mct_bound(d, delay, preds);
    const auto want = oracle::mct_terms(d, delay, preds);
    for (int i = 0; i < z; ++i)
      CHECK(got[static_cast<std::size_t>(i)] == doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
}

TEST_CASE("adding an earlier mission never speeds up later ones") {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int z = 6;
    AssignmentSolution d(z);
    std::vector<double> delay;
    for (int i = 0; i < z; ++i) {
      d[static_cast<std::size_t>(i)] = {1 + i % 2, 2 + i / 2};
      delay.push_back(std::uniform_real_distribution<double>(0.5, 9.0)(rng));
    }
    std::vector<std::vector<int>> preds(z);
    preds[5].push_back(0);
    const auto before = mct_bound(d, delay, preds);
    auto more = d;
    more.slots.push_back({1 + trial % 2, 1});
    delay.push_back(3.0);
    preds.emplace_back();
    const auto after = mct_bound(more, delay, preds);
    for (int i = 0; i < z; ++i) CHECK(after[static_cast<std::size_t>(i)] >= before[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("event driven completion times") {
  const AssignmentSolution d{{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  const std::vector<double> delay{2.0, 3.0, 5.0, 7.0};
  const auto t = mct_event_driven(d, delay, {{}, {}, {}, {1}});
  CHECK(t == std::vector<double>{2.0, 5.0, 5.0, 12.0});
  // m0 waits on m3 which queues behind m2 which waits on m1 behind m0.
  const auto stuck = mct_event_driven(d, delay, {{3}, {}, {1}, {}});
  CHECK(stuck[0] == kNeverCompletes);
  CHECK(stuck[3] == kNeverCompletes);
}

TEST_CASE("evaluate scalarization examples") {
  auto late = oracle::synthetic_row(2, 2, {5.0, 5.0}, {1.0, 1.0});
  const auto r0 = evaluate(AssignmentSolution{{1, 1}, {2, 1}}, late);
  CHECK(r0.completed_count == 0);
  CHECK(r0.fitness == 0.0);

  auto one = oracle::synthetic_row(1, 1, {1.0}, {2.0});
  one.missions[0].benefit_coeff = 50.0;
  one.missions[0].budget = 25.0;
  one.delays[0][0].offload_cost = 5.0;
  one.comm_benefit = {70.0};
  const auto r1 = evaluate(AssignmentSolution{{1, 1}}, one);
  CHECK(r1.completed_count == 1);
  CHECK(r1.remaining_budget[0] == 20.0);
  CHECK(r1.fitness == 60.0);
  CHECK(r1.total_benefit == 120.0);

  one.delays[0][0].offload_cost = 30.0;
  const auto r2 = evaluate(AssignmentSolution{{1, 1}}, one);
  CHECK(r2.completed_count == 0);
  CHECK(r2.remaining_budget[0] == -5.0);
  CHECK(r2.total_benefit == 0.0);
}

TEST_CASE("evaluate penalizes precedence and tolerates malformed input") {
  auto p = oracle::synthetic_row(2, 1, {1.0, 1.0}, {10.0, 10.0});
  oracle::add_dep(p, 0, 1);
  const auto good = evaluate(AssignmentSolution{{1, 1}, {1, 2}}, p);
  CHECK(good.completed_count == 2);
  const auto bad = evaluate(AssignmentSolution{{1, 2}, {1, 1}}, p);
  CHECK_FALSE(bad.completed[1]);
  CHECK_FALSE(bad.precedence_ok[1]);
  CHECK(bad.completed[0]);

  CHECK(evaluate(AssignmentSolution{{1, 1}}, p).completed_count == 0);
  CHECK_NOTHROW(evaluate(AssignmentSolution{{7, 1}, {-1, 0}}, p));
  CHECK(evaluate(AssignmentSolution{{7, 1}, {-1, 0}}, p).completed_count == 0);
}

TEST_CASE("evaluate and the fast evaluator agree with the oracle") {
  Rng rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    const auto p = oracle::random_row(6, 2, rng);
    FitnessEvaluator fast(p);
    long n = 0;
    oracle::for_each_valid_assignment(6, 2, [&](const AssignmentSolution& d) {
      const auto r = evaluate(d, p);
      const auto o = oracle::row_fitness(d, p);
      const auto s = fast(d);
      CHECK(r.fitness == doctest::Approx(o.fitness).epsilon(1e-12));
      CHECK(r.completed_count == o.completed);
      CHECK(s.fitness == doctest::Approx(o.fitness).epsilon(1e-12));
      CHECK(s.completed == o.completed);
      for (std::size_t i = 0; i < 6; ++i)
        if (r.completed[i]) CHECK(r.remaining_budget[i] >= 0.0);
      ++n;
    });
    CHECK(n == 720);
  }
}

TEST_CASE("brute force optimum is reached by enumeration through evaluate") {
  Rng rng(31);
  for (int z = 3; z <= 6; ++z) {
    const auto p = oracle::random_row(z, 2, rng);
    const auto best = oracle::enumerate_optimum(p);
    double top = -1.0;
    int top_completed = 0;
    oracle::for_each_valid_assignment(z, 2, [&](const AssignmentSolution& d) {
      const auto r = evaluate(d, p);
      if (r.fitness > top) {
        top = r.fitness;
        top_completed = r.completed_count;
      }
    });
    CHECK(top == doctest::Approx(best.fitness).epsilon(1e-12));
    CHECK(top_completed == best.completed);
  }
}

TEST_CASE("scaling the weights keeps the argmax") {
  Rng rng(37);
  auto p = oracle::random_row(5, 2, rng);
  auto argmax = [&](const RowProblem& q) {
    AssignmentSolution best;
    double top = -1.0;
    oracle::for_each_valid_assignment(5, 2, [&](const AssignmentSolution& d) {
      const double f = evaluate(d, q).fitness;
      if (f > top) {
        top = f;
        best = d;
      }
    });
    return best;
  };
  const auto base = argmax(p);
  for (double lambda : {0.1, 3.0, 250.0}) {
    auto q = p;
    q.config.gamma1 *= lambda;
    q.config.gamma2 *= lambda;
    CHECK(evaluate(argmax(q), p).fitness == doctest::Approx(evaluate(base, p).fitness).epsilon(1e-12));
  }
}

TEST_CASE("row problems from a generated scenario") {
  ScenarioParams params;
  params.missions.num_missions = 12;
  params.missions.z = 5;
  params.k_star = 2;
  params.missions.dep_density = 0.3;
  const auto s = generate_scenario(3, params);
  const auto last = build_row_problem(s, 2);
  CHECK(last.missions.size() == 5);
  CHECK(std::count_if(last.missions.begin(), last.missions.end(), [](const Mission& m) { return m.padding; }) == 3);
  CHECK_THROWS_AS(build_row_problem(s, 3), std::out_of_range);

  const auto first = build_row_problem(s, 0);
  const auto again = build_row_problem(s, 0);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& b = first.delays[i][k];
      CHECK(b.total_s == again.delays[i][k].total_s);
      CHECK(b.total_s == doctest::Approx(b.move_s + b.comm_s + b.comp_s).epsilon(1e-15));
    }
  }
  // Every padded assignment still evaluates the padding slots as complete.
  AssignmentSolution d(5);
  const auto q = vehicle_quotas(5, 2);
  for (std::size_t i = 0; i < 5; ++i) d[i] = {i < 3 ? 1 : 2, i < 3 ? static_cast<int>(i) + 1 : static_cast<int>(i) - 2};
  CHECK(q == std::vector<int>{3, 2});
  const auto r = evaluate(d, last);
  for (std::size_t i = 0; i < 5; ++i)
    if (last.missions[i].padding) CHECK(r.completed[i]);
  CHECK(r.completed_count <= 2);
}
