#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "concat/bignat.hpp"
#include "concat/contfrac.hpp"
#include "concat/linforms.hpp"
#include "concat/realexpr.hpp"
#include "concat/reduction.hpp"
#include "concat/search.hpp"
#include "json.hpp"

namespace concat {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCertificateSchema = "concat-prover-certificate/1";

enum class StepStatus { Verified, Discrepancy, Skipped };
std::string status_name(StepStatus s);

struct StepRecord {
  std::string id;
  std::string label;
  std::string anchor;
  std::string kind;  // dispatch tag for the checker
  std::string branch;
  Json inputs = Json::object();
  Json outputs = Json::object();
  StepStatus status = StepStatus::Verified;
  std::string details;
};

struct Certificate {
  int theorem = 0;
  Json environment = Json::object();
  std::vector<std::string> notes;
  std::vector<StepRecord> steps;
  std::optional<std::vector<BigNat>> conclusion;

  Json to_json() const;
  static Certificate from_json(const Json& j);
};

class StepFailed : public std::runtime_error {
 public:
  StepFailed(StepRecord step, std::string reason);
  const StepRecord& step() const { return step_; }
  const std::string& reason() const { return reason_; }

 private:
  StepRecord step_;
  std::string reason_;
};

enum class MLemma {
  Legendre,   // convergent argument on log alpha / log 10
  Reduction,  // single reduction with a constant mu
};

// Constants of one theorem's proof. Numbers are decimal strings as printed; every step
// recomputes its value, checks it against the plan and carries the plan value forward.
struct ProofPlan {
  int theorem = 1;
  Equation equation = Equation::FibLucas;
  SeqIndex search_max = 200;

  long min_shift = 4;  // n - k >= min_shift
  LambdaKind shift_family = LambdaKind::L1;
  LambdaKind k_family = LambdaKind::L2;
  std::string shift_coefficient = "2.41e10";
  std::string k_coefficient = "2.24e12";
  long shift_offset = 7;  // W = n - k - shift_offset
  long k_slack = 8;       // n < 2k + k_slack when m <= k
  std::string shift_bound = "8e11";
  std::string case_split_bound = "1.7e12";
  std::string chain_bound = "7e26";

  long m_lemma = 150;
  MLemma lemma = MLemma::Legendre;
  long lemma_exponent = 141;              // Legendre: alpha^(n-k-offset) >= alpha^exponent
  std::string legendre_threshold = "5.6e28";
  std::string amax_threshold = "1e27";
  std::size_t lemma_q_classical = 60;     // Reduction lemma
  std::string lemma_mu = "(div (log sqrt5) (log alpha))";
  long lemma_A_numerator = 6;
  std::string lemma_epsilon = "0.017775";
  long lemma_w = 160;

  std::string refined_bound = "4.5e16";

  std::size_t q_classical = 60;
  long A_numerator = 14;
  std::string mu_template;
  long grid_m0 = 1, grid_m1 = 150, grid_s0 = 4, grid_s_end_offset = 8;
  std::vector<long> excluded_shifts;  // shifts expected to fail and be removed by congruence
  std::string printed_epsilon = "0.00034";
  long printed_w = 170;
  bool w_inclusive = false;  // printed as 2k <= w rather than 2k < w
  long printed_k_bound = 85;

  std::vector<std::string> notes;
};

ProofPlan default_plan(int theorem);

struct CertifyOptions {
  long precision_cap = kDefaultPrecisionCap;
  unsigned threads = 0;
};

Certificate certify(const ProofPlan& plan, const CertifyOptions& opts = {});
inline Certificate certify(int theorem, const CertifyOptions& opts = {}) { return certify(default_plan(theorem), opts); }

struct LemmaReplay {
  bool contradiction = false;
  Rational legendre_threshold;  // lower bound on n when the 1/(2q^2) test fails
  Rational amax_threshold;      // lower bound on n in the convergent branch
  PartialQuotientMax amax{0, 0, 0};
};

// Both branches of the convergent argument for m above the lemma threshold, against n_upper.
// exponent is the floor of n-k-offset implied by that threshold.
LemmaReplay legendre_m_bound(const BigNat& n_upper, long exponent = 141, long max_bits = 4096);

// Reduction with mu = log sqrt5 / log alpha and M = n_upper; contradiction when the
// w bound falls below what m > m_lemma forces for n-k-6.
struct ReductionLemmaReplay {
  bool contradiction = false;
  ReductionOutcome outcome;
  long hypothesis_floor = 0;  // smallest n-k-offset allowed by m > m_lemma
};

ReductionLemmaReplay reduction_m_bound(const BigNat& n_upper, long m_lemma = 168, std::size_t q_classical = 60,
                                     long max_bits = kDefaultPrecisionCap);

// Independent replay of a certificate.
struct CheckReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> log;
  std::vector<BigNat> conclusion;
};

CheckReport check_certificate(const Json& certificate, long max_bits = kDefaultPrecisionCap);

}  // namespace concat
