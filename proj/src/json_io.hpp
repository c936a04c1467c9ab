#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "svamp/amplification_bounds.hpp"
#include "svamp/attack_lp.hpp"
#include "svamp/attack_oracle.hpp"
#include "svamp/boxes.hpp"
#include "svamp/protocol_sim.hpp"
#include "svamp/sv_source.hpp"

namespace svamp::io {

using json = nlohmann::ordered_json;

/// Rounds to 15 significant digits (printf %.15g then parse back).
double sig15(double v);

/// Rounded number, or null for NaN and infinities.
json number(double v);
json numbers(const std::vector<double>& values);

json to_json(const boxes::ChainBox& box);
boxes::ChainBox chain_box_from_json(const json& j);

json to_json(const source::ConditionalBounds& b);
json to_json(const bounds::BoundChainResult& r);
json to_json(const attack::AttackParams& p);
json to_json(const attack::ClosedForm& f);
json to_json(const attack::DualCertificate& c, bool with_slacks);
json to_json(const lp::LpSolution& s);
json to_json(const attack::CloudOracleReport& r, bool with_clouds);
json to_json(const protocol::Interval& i);
json to_json(const protocol::SimulationSummary& s);

/// Header plus one line per run.
void write_transcript_csv(std::ostream& out, const std::vector<protocol::RunRecord>& runs);

/// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

}  // namespace svamp::io
