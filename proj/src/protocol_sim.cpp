#include "svamp/protocol_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "svamp/amplification_bounds.hpp"
#include "svamp/error.hpp"
#include "svamp/rng.hpp"

namespace svamp::protocol {

std::string_view to_string(Supplier supplier) {
  switch (supplier) {
    case Supplier::honest_quantum: return "honest_quantum";
    case Supplier::honest_ideal: return "honest_ideal";
    case Supplier::attack: return "attack";
    case Supplier::toy: return "toy";
  }
  return "honest_quantum";
}

std::string_view to_string(BadBoxKind kind) {
  return kind == BadBoxKind::local_deterministic ? "local_deterministic" : "uniform_flipped";
}

std::string_view to_string(Result result) {
  switch (result) {
    case Result::fail_cardinality: return "fail_cardinality";
    case Result::fail_consistency: return "fail_consistency";
    case Result::bit: return "bit";
  }
  return "fail_cardinality";
}

Supplier parse_supplier(std::string_view name) {
  if (name == "honest_quantum") return Supplier::honest_quantum;
  if (name == "honest_ideal") return Supplier::honest_ideal;
  if (name == "attack") return Supplier::attack;
  if (name == "toy") return Supplier::toy;
  throw precondition_error("unknown supplier '" + std::string(name) + "'");
}

BadBoxKind parse_bad_box_kind(std::string_view name) {
  if (name == "local_deterministic") return BadBoxKind::local_deterministic;
  if (name == "uniform_flipped") return BadBoxKind::uniform_flipped;
  throw precondition_error("unknown bad box kind '" + std::string(name) + "'");
}

std::int64_t default_runs(int n) {
  require(n >= 4, "n must be at least 4");
  return static_cast<std::int64_t>(std::llround(std::pow(n / 2.0, 2.99)));
}

void validate(const ProtocolConfig& config) {
  require(config.n >= 4 && config.n % 2 == 0, "protocol needs an even chain length n >= 4");
  require(std::has_single_bit(static_cast<unsigned>(config.n)),
          "protocol needs n to be a power of two so settings come from whole bits");
  require(config.n <= (1 << 20), "protocol chain length is limited to 2^20");
  require(config.runs >= 0, "run count M must be nonnegative (0 selects the default)");
  source::SvParameter sv(config.epsilon);
  if (config.source_strategy == source::BiasStrategy::adversarial_table)
    source::validate_table(sv, config.source_table);
  if (config.supplier == Supplier::attack) {
    require(!config.attack_type_probs.empty(), "attack supplier needs an ensemble P_1..P_m");
    double total = 0.0;
    for (double p : config.attack_type_probs) {
      require(std::isfinite(p) && p >= 0.0, "attack type probabilities must be nonnegative");
      total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12, "attack type probabilities must sum to 1");
  }
}

namespace {

struct BoxChoice {
  bool bad = false;
  int contradiction_edge = 0;
  int base_bit = 0;
};

int ideal_parity(int edge, int n) { return edge == n ? 1 : 0; }

int measured_edge(int u, int v, int n) {
  if (v == u + 1) return u;
  if (v == u - 1) return v;
  if (u == 1 && v == n) return n;
  return 0;
}

// Output of the local box contradicting only edge c on setting s.
int local_output(int setting, int c, int base_bit) { return setting <= c ? base_bit : 1 - base_bit; }

int draw_index_bits(source::SvGenerator& gen, int bits) {
  int value = 0;
  for (int b = 0; b < bits; ++b) value = (value << 1) | gen.next();
  return value;
}

}  // namespace

ProtocolOutcome run_trial(const ProtocolConfig& config, std::uint64_t trial) {
  validate(config);
  const int n = config.n;
  const std::int64_t M = config.runs == 0 ? default_runs(n) : config.runs;
  require(M >= 1, "run count M must be at least 1");
  const std::uint64_t trial_seed = derive_seed(config.seed, trial);
  source::SvParameter sv(config.epsilon);
  source::SvGenerator gen(sv, config.source_strategy, derive_seed(trial_seed, 0), config.source_table);
  Rng device(derive_seed(trial_seed, 1));
  Rng adversary(derive_seed(trial_seed, 2));
  const int party_bits = std::countr_zero(static_cast<unsigned>(n)) - 1;  // log2(n/2)
  const double quantum_error = bounds::quantum_value(n);

  ProtocolOutcome out;
  std::vector<RunRecord> runs(static_cast<std::size_t>(M));
  std::vector<std::int64_t> s_runs;
  for (std::int64_t i = 0; i < M; ++i) {
    auto& rec = runs[i];
    rec.run_index = i;
    rec.alice_setting = 2 * draw_index_bits(gen, party_bits) + 1;
    rec.bob_setting = 2 * draw_index_bits(gen, party_bits) + 2;
    rec.edge = measured_edge(rec.alice_setting, rec.bob_setting, n);
    rec.in_s = rec.edge != 0;
    if (rec.in_s) s_runs.push_back(i);
  }
  out.s_size = static_cast<std::int64_t>(s_runs.size());

  // The supplier sees the settings through its correlation with the source.
  std::vector<BoxChoice> boxes(static_cast<std::size_t>(M));
  if (config.supplier == Supplier::attack && !s_runs.empty()) {
    const double draw = adversary.uniform();
    int j = static_cast<int>(config.attack_type_probs.size());
    double cumulative = 0.0;
    for (std::size_t t = 0; t < config.attack_type_probs.size(); ++t) {
      cumulative += config.attack_type_probs[t];
      if (draw < cumulative) {
        j = static_cast<int>(t) + 1;
        break;
      }
    }
    j = static_cast<int>(std::min<std::int64_t>(j, out.s_size));
    std::vector<std::int64_t> order = s_runs;
    for (int t = 0; t < j; ++t) {
      const auto pick = t + static_cast<std::int64_t>(adversary.below(order.size() - t));
      std::swap(order[t], order[pick]);
      auto& box = boxes[order[t]];
      box.bad = true;
      box.contradiction_edge = static_cast<int>(adversary.below(n)) + 1;
      box.base_bit = adversary.bit(0.5);
    }
    out.bad_boxes = j;
  } else if (config.supplier == Supplier::toy) {
    for (std::int64_t i : s_runs) {
      auto& box = boxes[i];
      box.bad = true;
      box.contradiction_edge = runs[i].edge % n + 1;  // never the measured edge
      box.base_bit = adversary.bit(0.5);
    }
    out.bad_boxes = static_cast<int>(s_runs.size());
  }

  const bool deterministic_bad =
      config.supplier == Supplier::toy || config.bad_box_kind == BadBoxKind::local_deterministic;
  for (std::int64_t i = 0; i < M; ++i) {
    auto& rec = runs[i];
    const auto& box = boxes[i];
    rec.bad = box.bad;
    rec.contradiction_edge = box.contradiction_edge;
    if (!rec.in_s) {
      rec.x = device.bit(0.5);
      rec.y = device.bit(0.5);
      continue;
    }
    const int parity = ideal_parity(rec.edge, n);
    if (box.bad && deterministic_bad) {
      rec.x = local_output(rec.alice_setting, box.contradiction_edge, box.base_bit);
      rec.y = local_output(rec.bob_setting, box.contradiction_edge, box.base_bit);
    } else {
      rec.x = device.bit(0.5);
      int flip = 0;
      if (box.bad)
        flip = rec.edge == box.contradiction_edge ? 1 : 0;
      else if (config.supplier == Supplier::honest_quantum)
        flip = device.bit(quantum_error);
      rec.y = rec.x ^ parity ^ flip;
    }
    rec.consistent = (rec.x ^ rec.y) == parity;
    if (!rec.consistent) ++out.inconsistent_in_s;
  }

  const double n_d = static_cast<double>(n);
  const double s_d = static_cast<double>(out.s_size);
  const double m_d = static_cast<double>(M);
  if (s_d < 2.0 * m_d / n_d || s_d > 6.0 * m_d / n_d) {
    out.result = Result::fail_cardinality;
  } else if (out.inconsistent_in_s > 0) {
    out.result = Result::fail_consistency;
  } else {
    // f: ceil(log2 |S|) further source bits, rejection sampled into [0, |S|).
    const auto size = static_cast<std::uint64_t>(out.s_size);
    const int bits = size <= 1 ? 0 : std::bit_width(size - 1);
    const bool steer = config.supplier == Supplier::attack;
    std::vector<std::uint64_t> bad_prefix(size + 1, 0);
    for (std::uint64_t p = 0; p < size; ++p) bad_prefix[p + 1] = bad_prefix[p] + (boxes[s_runs[p]].bad ? 1 : 0);
    auto count_range = [&](std::uint64_t lo, std::uint64_t hi, bool bad_only) -> double {
      lo = std::min(lo, size);
      hi = std::min(hi, size);
      if (hi <= lo) return 0.0;
      return static_cast<double>(bad_only ? bad_prefix[hi] - bad_prefix[lo] : hi - lo);
    };
    std::uint64_t index = 0;
    do {
      index = 0;
      for (int t = bits - 1; t >= 0; --t) {
        int bit = 0;
        if (steer) {
          // Uniform over bad positions under the current prefix, clipped to the SV interval.
          const std::uint64_t base = index << (t + 1);
          const std::uint64_t mid = base + (std::uint64_t{1} << t);
          const std::uint64_t end = base + (std::uint64_t{2} << t);
          const bool any_bad = bad_prefix[size] > 0 && count_range(base, end, true) > 0.0;
          const double total = count_range(base, end, any_bad);
          const double wanted = total > 0.0 ? count_range(mid, end, any_bad) / total : 0.5;
          const auto step = gen.next_steered(wanted);
          if (step.clipped) out.steering_clipped = true;
          bit = step.bit;
        } else {
          bit = gen.next();
        }
        index = (index << 1) | static_cast<std::uint64_t>(bit);
      }
    } while (index >= size);
    out.f_index = s_runs[index];
    const auto& rec = runs[out.f_index];
    out.result = Result::bit;
    out.bit = rec.x;
    out.f_on_bad = rec.bad;
    out.adversary_guess = rec.bad && deterministic_bad ? rec.x : 0;
  }
  if (config.keep_transcript) out.transcript = std::move(runs);
  return out;
}

ProtocolOutcome run_protocol(const ProtocolConfig& config) { return run_trial(config, 0); }

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  require(successes <= trials, "successes cannot exceed trials");
  if (trials == 0) return {0.0, 0.0, 1.0};
  const double t = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / t;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / t;
  const double centre = (p + z2 / (2.0 * t)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

// |p - 1/2| with the interval mapped through the absolute value.
Interval folded(const Interval& p) {
  Interval out;
  out.estimate = std::abs(p.estimate - 0.5);
  out.upper = std::max(std::abs(p.lower - 0.5), std::abs(p.upper - 0.5));
  out.lower = (p.lower <= 0.5 && p.upper >= 0.5) ? 0.0
                                                 : std::min(std::abs(p.lower - 0.5), std::abs(p.upper - 0.5));
  return out;
}

void accumulate(SimulationSummary& s, const ProtocolOutcome& o) {
  ++s.trials;
  s.s_size_total += static_cast<std::uint64_t>(o.s_size);
  s.in_s_runs += static_cast<std::uint64_t>(o.s_size);
  s.inconsistent_in_s += static_cast<std::uint64_t>(o.inconsistent_in_s);
  if (o.steering_clipped) ++s.clipped;
  switch (o.result) {
    case Result::fail_cardinality: ++s.fail_cardinality; break;
    case Result::fail_consistency: ++s.fail_consistency; break;
    case Result::bit:
      ++s.accepted;
      if (o.bit == 1) ++s.ones;
      if (o.bit == o.adversary_guess) ++s.guess_hits;
      if (o.f_on_bad) ++s.f_on_bad;
      break;
  }
}

void merge(SimulationSummary& into, const SimulationSummary& from) {
  into.trials += from.trials;
  into.accepted += from.accepted;
  into.fail_cardinality += from.fail_cardinality;
  into.fail_consistency += from.fail_consistency;
  into.ones += from.ones;
  into.guess_hits += from.guess_hits;
  into.in_s_runs += from.in_s_runs;
  into.inconsistent_in_s += from.inconsistent_in_s;
  into.f_on_bad += from.f_on_bad;
  into.clipped += from.clipped;
  into.s_size_total += from.s_size_total;
}

}  // namespace

Interval SimulationSummary::acceptance() const { return wilson_interval(accepted, trials); }

Interval SimulationSummary::acceptance_given_cardinality() const {
  return wilson_interval(accepted, trials - fail_cardinality);
}

Interval SimulationSummary::inconsistency_rate() const {
  return wilson_interval(inconsistent_in_s, in_s_runs);
}

Interval SimulationSummary::bias() const { return folded(wilson_interval(guess_hits, accepted)); }

Interval SimulationSummary::marginal_bias() const { return folded(wilson_interval(ones, accepted)); }

Interval SimulationSummary::f_on_bad_rate() const { return wilson_interval(f_on_bad, accepted); }

SimulationSummary simulate(const ProtocolConfig& config, std::uint64_t trials, int threads) {
  validate(config);
  require(trials >= 1, "trials must be at least 1");
  require(threads >= 1, "threads must be at least 1");
  auto plain = config;
  plain.keep_transcript = false;
  const auto workers = static_cast<std::uint64_t>(std::min<std::uint64_t>(threads, trials));
  std::vector<SimulationSummary> parts(workers);
  auto work = [&](std::uint64_t w) {
    const std::uint64_t begin = trials * w / workers;
    const std::uint64_t end = trials * (w + 1) / workers;
    for (std::uint64_t t = begin; t < end; ++t) accumulate(parts[w], run_trial(plain, t));
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  SimulationSummary total;
  for (const auto& p : parts) merge(total, p);
  return total;
}

Interval estimate_acceptance(const ProtocolConfig& config, std::uint64_t trials, int threads) {
  return simulate(config, trials, threads).acceptance();
}

Interval estimate_output_bias(const ProtocolConfig& config, std::uint64_t trials, int threads) {
  return simulate(config, trials, threads).bias();
}

}  // namespace svamp::protocol
