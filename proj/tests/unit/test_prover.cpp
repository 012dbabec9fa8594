#include "doctest.h"

#include "concat/prover.hpp"

using namespace concat;

namespace {

const Certificate& cert(int theorem) {
  static const Certificate c1 = certify(1);
  static const Certificate c2 = certify(2);
  return theorem == 1 ? c1 : c2;
}

Json without_environment(Json j) {
  j.erase("environment");
  return j;
}

Json& step(Json& cert, const std::string& id) {
  for (auto& s : cert["steps"]) {
    if (s["id"] == id) return s;
  }
  throw std::runtime_error("no step " + id);
}

std::vector<long> longs(const std::vector<BigNat>& v) {
  std::vector<long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

bool fails_at(const ProofPlan& plan, const std::string& id) {
  try {
    certify(plan);
  } catch (const StepFailed& e) {
    return e.step().id == id;
  }
  return false;
}

}  // namespace

TEST_SUITE("prover") {
  TEST_CASE("both theorems conclude") {
    REQUIRE(cert(1).conclusion);
    CHECK(longs(*cert(1).conclusion) == std::vector<long>{1, 2, 3, 13, 21, 34});
    REQUIRE(cert(2).conclusion);
    CHECK(longs(*cert(2).conclusion) == std::vector<long>{13, 21});
  }

  TEST_CASE("step order") {
    std::vector<std::string> ids;
    for (const auto& s : cert(2).steps) ids.push_back(s.id);
    const std::vector<std::string> expected{
        "initial_search", "index_window", "shift_floor",    "exponent_max", "instances",      "height_eta3",
        "coefficient_shift", "coefficient_k", "shift_bound", "case_k_le_m", "case_m_le_k",   "n_upper",
        "m_bound",        "branch_k_le_m", "refined_bound", "reduction_sweep", "congruence", "k_bound",
        "contradiction",  "gap_closure"};
    CHECK(ids == expected);
    CHECK(cert(1).steps.size() == expected.size());  // degenerate_left instead of congruence
  }

  TEST_CASE("recorded quantities") {
    Json j1 = cert(1).to_json();
    CHECK(step(j1, "reduction_sweep")["outputs"]["argmin"] == Json::array({50, 20}));
    CHECK(step(j1, "reduction_sweep")["outputs"]["w_bound"] == "170");
    CHECK(step(j1, "k_bound")["outputs"]["k_bound"] == "85");
    CHECK(step(j1, "m_bound")["outputs"]["a_max"] == "106");
    CHECK(step(j1, "height_eta3")["status"] == "Discrepancy");
    Json j2 = cert(2).to_json();
    CHECK(step(j2, "m_bound")["outputs"]["w_bound"] == "160");
    CHECK(step(j2, "reduction_sweep")["outputs"]["failing_shifts"] == Json::array({4, 8}));
    CHECK(step(j2, "reduction_sweep")["outputs"]["argmin"] == Json::array({44, 27}));
    CHECK(step(j2, "k_bound")["outputs"]["k_bound"] == "117");
    CHECK(step(j2, "index_window")["status"] == "Discrepancy");
  }

  TEST_CASE("JSON round trip") {
    for (int t : {1, 2}) {
      const Json j = cert(t).to_json();
      CHECK(Certificate::from_json(j).to_json() == j);
      CHECK(j["schema"] == kCertificateSchema);
    }
  }

  TEST_CASE("certificates are deterministic") {
    CertifyOptions one;
    one.threads = 1;
    const Json a = without_environment(certify(1, one).to_json());
    CHECK(a == without_environment(cert(1).to_json()));
  }

  TEST_CASE("independent checker accepts both certificates") {
    for (int t : {1, 2}) {
      const CheckReport rep = check_certificate(cert(t).to_json());
      CHECK(rep.ok);
      CHECK(rep.conclusion == *cert(t).conclusion);
    }
  }

  TEST_CASE("tampered plans fail at the right step") {
    ProofPlan p = default_plan(1);
    p.shift_coefficient = "2.3e10";  // below the recomputed 2.4009e10
    CHECK(fails_at(p, "coefficient_shift"));
    p = default_plan(2);
    p.k_coefficient = "2.2e12";
    CHECK(fails_at(p, "coefficient_k"));
    p = default_plan(1);
    p.shift_bound = "5e11";
    CHECK(fails_at(p, "shift_bound"));
    p = default_plan(1);
    p.printed_w = 160;
    CHECK(fails_at(p, "reduction_sweep"));
    p = default_plan(2);
    p.lemma_w = 150;
    CHECK(fails_at(p, "m_bound"));
    p = default_plan(1);
    p.search_max = 100;
    CHECK(fails_at(p, "branch_k_le_m"));
  }

  TEST_CASE("tampered certificates are rejected") {
    Json j = cert(1).to_json();
    step(j, "reduction_sweep")["outputs"]["rows"][0][4] = "1";
    CHECK_FALSE(check_certificate(j).ok);

    j = cert(1).to_json();
    j["conclusion"]["values"].push_back("55");
    CHECK_FALSE(check_certificate(j).ok);

    j = cert(2).to_json();
    step(j, "coefficient_shift")["inputs"]["plan_value"] = "7.1e12";
    CHECK_FALSE(check_certificate(j).ok);

    j = cert(2).to_json();
    step(j, "k_bound")["outputs"]["k_bound"] = "100";
    CHECK_FALSE(check_certificate(j).ok);

    j = cert(2).to_json();
    auto& steps = j["steps"];
    for (auto it = steps.begin(); it != steps.end(); ++it) {
      if ((*it)["id"] == "congruence") {
        steps.erase(it);
        break;
      }
    }
    CHECK_FALSE(check_certificate(j).ok);

    j = cert(1).to_json();
    j["schema"] = "something-else";
    CHECK_FALSE(check_certificate(j).ok);
  }

  TEST_CASE("lemma replays") {
    const auto leg = legendre_m_bound(parse_rational("7e26").get_num());
    CHECK(leg.contradiction);
    CHECK(leg.amax.value == 106);
    CHECK(leg.legendre_threshold > parse_rational("5.6e28"));
    CHECK(leg.amax_threshold > parse_rational("1e27"));
    const auto red = reduction_m_bound(parse_rational("2.5e29").get_num());
    CHECK(red.contradiction);
    CHECK(red.hypothesis_floor == 162);
    REQUIRE(std::holds_alternative<Reduced>(red.outcome));
    CHECK(std::get<Reduced>(red.outcome).w_bound == 160);
  }
}
