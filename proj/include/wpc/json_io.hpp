// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wpc Authors
//
// JSON views of channels, designs, traces, result tables and experiment
// specs. Complex numbers are [re, im]; matrices are arrays of rows.

#pragma once

#include "json.hpp"

#include "wpc/experiment.hpp"

namespace wpc {

using Json = nlohmann::json;

Json to_json(const ChannelSet& ch);
ChannelSet channels_from_json(const Json& j);

Json to_json(const Design& d);
Design design_from_json(const Json& j);

Json to_json(const RunTrace& trace);
Json to_json(const SystemConfig& cfg);
Json to_json(const ResultTable& table);

Json to_json(const ExperimentSpec& spec);
/// Missing fields keep their defaults; unknown fields are rejected.
/// Throws std::invalid_argument with the offending field name.
ExperimentSpec spec_from_json(const Json& j);

}  // namespace wpc
