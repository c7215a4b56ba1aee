#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qnm/experiments.hpp"

using namespace qnm;

TEST_CASE("matrix json round trip") {
  std::mt19937_64 rng(3);
  Mat m = random_matrix(3, 5, rng);
  Mat back = matrix_from_json(matrix_to_json(m));
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("layout json round trip") {
  SystemLayout l({{"A", 2}, {"B", 3}, {"R", 4}});
  SystemLayout back = layout_from_json(layout_to_json(l));
  REQUIRE(back.registers().size() == 3);
  CHECK(back.reg(1).label == "B");
  CHECK(back.reg(2).dim == 4);
}

TEST_CASE("channel json round trip preserves the action") {
  std::mt19937_64 rng(5);
  Mat u = random_unitary(3, rng);
  QuantumChannel ch = QuantumChannel::unitary(u, SystemLayout::single("A", 3));
  QuantumChannel back = channel_from_json(channel_to_json(ch));
  Mat rho = random_density_matrix(3, rng);
  CHECK((back.apply_matrix(rho) - ch.apply_matrix(rho)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ensemble json round trip") {
  UnitaryEnsemble e = pauli_group(1);
  UnitaryEnsemble back = ensemble_from_json(ensemble_to_json(e));
  REQUIRE(back.elements.size() == 4);
  for (size_t i = 0; i < 4; ++i)
    CHECK((back.elements[i].unitary - e.elements[i].unitary).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("verdict records enforce measured-vs-bound semantics") {
  VerdictRecord r;
  r.experiment = "demo";
  r.set("ok", 0.5, 1.0);
  r.finalize();
  CHECK(r.pass);
  r.set("bad", 2.0, 1.0);
  r.finalize();
  CHECK(!r.pass);
  Json j = verdict_to_json(r);
  CHECK(j.at("schema") == "qnmlab/1");
  CHECK(!j.contains("runtime_ms"));  // byte-stable files exclude timing
}

TEST_CASE("registry knows every built-in experiment") {
  const auto& reg = experiment_registry();
  CHECK(reg.size() == 13);
  for (const char* name :
       {"secrecy-1design", "its-iff-ind", "nm-implies-its", "nm-2design",
        "characterization", "nm-implies-abw", "injection-separation",
        "qotp-malleable", "werner-holevo-sideinfo", "gyz-2design",
        "gyz-implies-dns", "dns-from-nm", "twirl-lemmas"}) {
    CHECK(find_experiment(name) != nullptr);
  }
  CHECK(find_experiment("no-such-thing") == nullptr);
  CHECK_THROWS_AS(run_experiment("no-such-thing", Json::object(), 1),
                  std::out_of_range);
}

TEST_CASE("unknown config fields are rejected") {
  Json cfg{{"bogus", 1}};
  CHECK_THROWS_AS(run_experiment("secrecy-1design", cfg, 1), std::invalid_argument);
}

TEST_CASE("incompatible attack selection raises a combination error") {
  Json cfg{{"attacks", Json::array({"no-such-attack"})}, {"states", 1}};
  CHECK_THROWS_AS(run_experiment("nm-2design", cfg, 1), CombinationError);
  Json cfg2{{"scheme", "qotp1"}};
  CHECK_THROWS_AS(run_experiment("nm-2design", cfg2, 1), CombinationError);
}

TEST_CASE("small experiments pass and are byte deterministic") {
  Json cfg{{"pairs", 3}};
  VerdictRecord a = run_experiment("its-iff-ind", cfg, 0xABC);
  VerdictRecord b = run_experiment("its-iff-ind", cfg, 0xABC);
  CHECK(a.pass);
  CHECK(verdict_to_json(a).dump() == verdict_to_json(b).dump());

  VerdictRecord c = run_experiment("secrecy-1design", Json{{"states", 3}}, 7);
  CHECK(c.pass);
  CHECK(c.inputs_digest == run_experiment("secrecy-1design", Json{{"states", 3}}, 7)
                               .inputs_digest);
  // digest depends on the seed
  CHECK(c.inputs_digest !=
        run_experiment("secrecy-1design", Json{{"states", 3}}, 8).inputs_digest);
}

TEST_CASE("deficiency report serialization") {
  DeficiencyReport rep = design_deficiency(pauli_group(1), DesignNotion::TTwirl1);
  Json j = deficiency_to_json(rep);
  CHECK(j.at("lower").get<double>() <= j.at("upper").get<double>() + 1e-12);
}
