#include "svamp/attack_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "svamp/error.hpp"
#include "svamp/logspace.hpp"

namespace svamp::attack {

namespace {

struct CloudAccumulator {
  double q = 0.0;
  std::vector<double> f_joint;  // P(f = i, cloud) per run i
};

}  // namespace

CloudOracleReport brute_force_cloud_oracle(const AttackParams& params, const AttackEnsemble& ensemble) {
  const int m = params.m;
  const int n = static_cast<int>(params.n);
  require(m >= 1 && m <= 6 && params.n >= 2 && params.n <= 4,
          "brute-force oracle is limited to m <= 6 and n <= 4");
  require(ensemble.m == m && ensemble.n == params.n, "ensemble shape differs from parameters");

  // Run i measures edge (i mod n) + 1; by symmetry any fixed choice gives the same numbers.
  std::vector<int> measured(m);
  for (int i = 0; i < m; ++i) measured[i] = i % n + 1;

  std::vector<double> r(m);
  for (int j = 1; j <= m; ++j) r[j - 1] = ensemble.sequence_weight(j);

  CloudOracleReport report;
  report.m = m;
  report.n = params.n;
  std::map<std::vector<int>, CloudAccumulator> clouds;

  // Label per run: 0 = ideal, e in 1..n = bad with contradiction on edge e.
  std::vector<int> label(m, 0);
  const auto total = static_cast<std::uint64_t>(std::pow(n + 1, m));
  for (std::uint64_t code = 1; code < total; ++code) {
    std::uint64_t c = code;
    int bad = 0;
    for (int i = 0; i < m; ++i) {
      label[i] = static_cast<int>(c % (n + 1));
      c /= n + 1;
      if (label[i] != 0) ++bad;
    }
    ++report.sequences;
    const double weight = r[bad - 1];
    std::vector<int> pattern(m);
    for (int i = 0; i < m; ++i) pattern[i] = label[i] == measured[i] ? 1 : 0;
    auto& acc = clouds[pattern];
    if (acc.f_joint.empty()) acc.f_joint.assign(m, 0.0);
    acc.q += weight;
    for (int i = 0; i < m; ++i)
      if (label[i] != 0) acc.f_joint[i] += weight / bad;
  }

  std::vector<double> type_probs = ensemble.type_probs;
  for (const auto& [pattern, acc] : clouds) {
    const int k = static_cast<int>(std::count(pattern.begin(), pattern.end(), 1));
    if (k == 0) continue;
    const int i = static_cast<int>(std::find(pattern.begin(), pattern.end(), 1) - pattern.begin());
    CloudCheck check;
    check.pattern = pattern;
    check.k = k;
    check.q_enumerated = acc.q;
    check.q_formula = cloud_probability(ensemble, k);
    double f_formula = 0.0;
    for (int s = 0; s <= m - k; ++s)
      f_formula += logspace::binomial_value(m - k, s) * std::pow(n - 1, s) * r[k + s - 1] / (k + s);
    check.f_given_cloud = acc.q > 0.0 ? acc.f_joint[i] / acc.q : 0.0;
    check.f_given_cloud_formula = check.q_formula > 0.0 ? f_formula / check.q_formula : 0.0;
    const double scale = logspace::binomial_value(m, k) * std::pow(static_cast<double>(n), k);
    check.residual_enumerated = scale * (acc.f_joint[i] - params.c_plus * acc.q);
    for (int j = k; j <= m; ++j)
      check.residual_lp += constraint_coefficient(params, k, j) * type_probs[j - 1];
    check.sv_bound_holds = check.f_given_cloud <= params.c_plus + 1e-12;

    // every detected position must see the same conditional probability
    for (int t = 0; t < m; ++t)
      if (pattern[t] == 1)
        report.max_f_error = std::max(report.max_f_error, std::abs(acc.f_joint[t] - acc.f_joint[i]));
    report.max_q_error = std::max(report.max_q_error, std::abs(check.q_enumerated - check.q_formula));
    report.max_f_error =
        std::max(report.max_f_error, std::abs(check.f_given_cloud - check.f_given_cloud_formula));
    report.max_residual_error =
        std::max(report.max_residual_error, std::abs(check.residual_enumerated - check.residual_lp));
    report.clouds.push_back(std::move(check));
  }
  return report;
}

void validate_raw(const RawEnsemble& raw) {
  require(raw.m >= 1 && raw.n >= 2, "raw ensemble needs m >= 1 and n >= 2");
  double total = 0.0;
  for (const auto& seq : raw.sequences) {
    require(seq.contradictions.size() == static_cast<std::size_t>(raw.m),
            "every raw sequence needs one contradiction set per run");
    require(std::isfinite(seq.mass) && seq.mass >= 0.0, "raw masses must be nonnegative");
    bool any_bad = false;
    for (const auto& set : seq.contradictions) {
      std::set<int> seen;
      for (int e : set) {
        require(e >= 1 && e <= raw.n, "contradiction edge out of range");
        require(seen.insert(e).second, "contradiction edges within a box must be distinct");
      }
      if (!set.empty()) any_bad = true;
    }
    require(any_bad || seq.mass == 0.0, "all-ideal sequences must carry zero mass");
    total += seq.mass;
  }
  require(std::abs(total - 1.0) <= 1e-12, "raw masses must sum to 1");
}

AttackEnsemble symmetrize_attack(const RawEnsemble& raw) {
  validate_raw(raw);
  // After the 1/j replacement the number of bad boxes per sequence is unchanged,
  // so the type distribution is the raw count distribution; averaging over
  // arrangements and edges then fixes r_j = P_j / (C(m,j) n^j).
  std::vector<double> type_probs(raw.m, 0.0);
  for (const auto& seq : raw.sequences) {
    int bad = 0;
    for (const auto& set : seq.contradictions)
      if (!set.empty()) ++bad;
    if (bad > 0) type_probs[bad - 1] += seq.mass;
  }
  return ensemble_from_type_probs(type_probs, raw.n);
}

double raw_acceptance_probability(const RawEnsemble& raw) {
  validate_raw(raw);
  double total = 0.0;
  for (const auto& seq : raw.sequences) {
    double pass = seq.mass;
    for (const auto& set : seq.contradictions)
      pass *= 1.0 - static_cast<double>(set.size()) / static_cast<double>(raw.n);
    total += pass;
  }
  return total;
}

}  // namespace svamp::attack
