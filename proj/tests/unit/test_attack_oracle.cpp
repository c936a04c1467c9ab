#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "svamp/attack_oracle.hpp"
#include "svamp/error.hpp"
#include "svamp/sv_source.hpp"

using namespace svamp;
using namespace svamp::attack;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> normalized_weights(int m, std::int64_t n, std::vector<double> w) {
  double total = 0.0;
  for (int j = 1; j <= m; ++j) {
    double c = 1.0;
    for (int t = 0; t < j; ++t) c = c * (m - t) / (t + 1);
    total += c * std::pow(static_cast<double>(n), j) * w[j - 1];
  }
  for (double& x : w) x /= total;
  return w;
}

// All contradiction sets over n edges, the empty set first.
std::vector<std::vector<int>> subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int e = 0; e < n; ++e)
      if ((mask >> e) & 1) s.push_back(e + 1);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("two runs, two edges, uniform weights: conditional f probability") {
  const auto w = normalized_weights(2, 2, {1.0, 1.0});
  const auto e = ensemble_from_sequence_weights(w, 2);
  const auto p = make_attack_params(2, 2, 0.5, svamp::source::c_plus(svamp::source::SvParameter(0.1), 2));
  const auto report = brute_force_cloud_oracle(p, e);
  bool seen = false;
  for (const auto& c : report.clouds) {
    if (c.pattern == std::vector<int>{1, 0}) {
      const double q1 = w[0] + w[1];
      CHECK_THAT(c.f_given_cloud, WithinAbs((w[0] + 0.5 * w[1]) / q1, 1e-12));
      seen = true;
    }
  }
  CHECK(seen);
  CHECK(report.sequences == 8);  // 3^2 - 1
}

TEST_CASE("enumeration reproduces cloud probabilities and LP rows") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int m = 1; m <= 5; ++m) {
    for (std::int64_t n : {2, 4}) {
      std::vector<std::vector<double>> draws{std::vector<double>(m, 1.0)};
      for (int t = 0; t < 2; ++t) {
        std::vector<double> w(m);
        for (double& x : w) x = u(rng);
        draws.push_back(w);
      }
      for (const auto& raw : draws) {
        const auto e = ensemble_from_sequence_weights(normalized_weights(m, n, raw), n);
        const double cp = svamp::source::c_plus(svamp::source::SvParameter(0.05), m);
        const auto report = brute_force_cloud_oracle(make_attack_params(m, n, 0.7, cp), e);
        CHECK(report.max_q_error <= 1e-12);
        CHECK(report.max_f_error <= 1e-12);
        CHECK(report.max_residual_error <= 1e-12);
        for (const auto& c : report.clouds) CHECK(c.k >= 1);
      }
    }
  }
}

TEST_CASE("oracle regime is limited") {
  const auto e = ensemble_from_type_probs(std::vector<double>(7, 1.0 / 7), 2);
  CHECK_THROWS_AS(brute_force_cloud_oracle(make_attack_params(7, 2, 0.5, 0.5), e), precondition_error);
}

TEST_CASE("raw ensemble validation") {
  RawEnsemble ok{1, 2, {{{{1, 2}}, 1.0}}};
  CHECK_NOTHROW(validate_raw(ok));
  RawEnsemble ideal{1, 2, {{{{}}, 1.0}}};
  CHECK_THROWS_AS(validate_raw(ideal), precondition_error);
  RawEnsemble repeated{1, 2, {{{{1, 1}}, 1.0}}};
  CHECK_THROWS_AS(validate_raw(repeated), precondition_error);
  RawEnsemble mass{1, 2, {{{{1}}, 0.5}}};
  CHECK_THROWS_AS(validate_raw(mass), precondition_error);
}

TEST_CASE("double contradiction box splits evenly") {
  RawEnsemble raw{1, 2, {{{{1, 2}}, 1.0}}};
  const auto e = symmetrize_attack(raw);
  CHECK_THAT(e.type_probs[0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(e.sequence_weight(1), WithinAbs(0.5, 1e-15));
}

TEST_CASE("symmetric single-contradiction ensemble is a fixed point") {
  RawEnsemble raw{2, 2, {}};
  // all 8 type >= 1 single-contradiction sequences weighted by type: type 1 total 0.4, type 2 total 0.6
  for (int a = 0; a <= 2; ++a) {
    for (int b = 0; b <= 2; ++b) {
      if (a == 0 && b == 0) continue;
      RawSequence s;
      s.contradictions = {a ? std::vector<int>{a} : std::vector<int>{}, b ? std::vector<int>{b} : std::vector<int>{}};
      s.mass = (a && b) ? 0.6 / 4 : 0.4 / 4;
      raw.sequences.push_back(s);
    }
  }
  const auto e = symmetrize_attack(raw);
  CHECK_THAT(e.type_probs[0], WithinAbs(0.4, 1e-15));
  CHECK_THAT(e.type_probs[1], WithinAbs(0.6, 1e-15));
  CHECK_THAT(e.sequence_weight(1), WithinAbs(0.1, 1e-15));
  CHECK_THAT(e.sequence_weight(2), WithinAbs(0.15, 1e-15));
  CHECK_THAT(raw_acceptance_probability(raw), WithinAbs(0.4 * 0.5 + 0.6 * 0.25, 1e-15));
}

TEST_CASE("symmetrization never lowers acceptance") {
  const int n = 2;
  const auto sets = subsets(n);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int m = 1; m <= 3; ++m) {
    std::vector<std::vector<std::vector<int>>> sequences;
    const int choices = static_cast<int>(sets.size());
    int total = 1;
    for (int i = 0; i < m; ++i) total *= choices;
    for (int code = 1; code < total; ++code) {  // code 0 is all ideal
      std::vector<std::vector<int>> seq;
      int c = code;
      for (int i = 0; i < m; ++i) {
        seq.push_back(sets[c % choices]);
        c /= choices;
      }
      sequences.push_back(seq);
    }
    auto check = [&](const RawEnsemble& raw) {
      const auto e = symmetrize_attack(raw);
      std::vector<double> types(m, 0.0);
      double before = 0.0;
      for (const auto& s : raw.sequences) {
        int j = 0;
        double pass = s.mass;
        for (const auto& set : s.contradictions) {
          j += !set.empty();
          pass *= 1.0 - static_cast<double>(set.size()) / n;
        }
        types[j - 1] += s.mass;
        before += pass;
      }
      for (int j = 0; j < m; ++j) CHECK_THAT(e.type_probs[j], WithinAbs(types[j], 1e-12));
      CHECK_THAT(raw_acceptance_probability(raw), WithinAbs(before, 1e-12));
      CHECK(acceptance_probability(e, 1.0 - 1.0 / n) >= before - 1e-12);
    };
    for (const auto& s : sequences) check(RawEnsemble{m, n, {{s, 1.0}}});
    for (int t = 0; t < 200; ++t) {  // random mixtures over all sequences
      RawEnsemble raw{m, n, {}};
      double sum = 0.0;
      for (const auto& s : sequences) {
        const double w = u(rng);
        raw.sequences.push_back({s, w});
        sum += w;
      }
      for (auto& s : raw.sequences) s.mass /= sum;
      check(raw);
    }
  }
}
