#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "govsim/core.hpp"
#include "govsim/governance.hpp"
#include "govsim/metrics.hpp"

namespace govsim::engine {

struct SimulationConfig;  // engine.hpp

/// Destination for serialized event-log lines (no trailing newline in the
/// argument; sinks append it).
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void line(std::string_view text) = 0;
};

class NullSink final : public EventSink {
 public:
  void line(std::string_view) override {}
};

class VectorSink final : public EventSink {
 public:
  void line(std::string_view text) override { lines_.emplace_back(text); }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  std::vector<std::string> lines_;
};

class FileSink final : public EventSink {
 public:
  explicit FileSink(const std::string& path);
  void line(std::string_view text) override;
  void close();

 private:
  std::ofstream out_;
};

/// Serializes the append-only JSONL event stream. One JSON object per
/// line, snake_case fields, seq first, logical timestamps only. Numeric
/// fields use shortest round-trip formatting, so identical state produces
/// byte-identical logs.
class EventWriter {
 public:
  explicit EventWriter(EventSink& sink) : sink_(sink) {}

  void header(const SimulationConfig& cfg);
  void proposal(const SoftInteraction& si, double expected_surplus,
                double expected_harm);
  void acceptance(const SoftInteraction& si);
  void rejection(const SoftInteraction& si);
  void audit(const SoftInteraction& si, double penalty, double slash_amount);
  void payoff(const SoftInteraction& si, double tax_initiator,
              double tax_counterparty);
  void freeze(std::int64_t epoch, std::int64_t step,
              const std::string& agent_id, std::int64_t frozen_until_epoch,
              bool by_toxicity, std::optional<double> running_toxicity,
              std::int64_t violation_count);
  void unfreeze(std::int64_t epoch, std::int64_t step,
                const std::string& agent_id);
  void decay(std::int64_t epoch, std::int64_t step, double rate,
             std::span<const AgentState> agents);
  void collusion_flag(std::int64_t epoch, std::int64_t step,
                      const governance::CollusionFlag& flag, double penalty);
  void epoch_boundary(const metrics::EpochMetrics& m, std::int64_t step);
  void stall(std::int64_t epoch, std::int64_t step,
             std::int64_t eligible_count);

 private:
  void emit(nlohmann::ordered_json&& event);

  EventSink& sink_;
  std::int64_t seq_ = 0;
};

struct ReplayResult {
  metrics::RunSummary summary;
  bool truncated = false;
  std::vector<std::string> warnings;
};

/// Recomputes a RunSummary purely from a serialized event log. Malformed
/// content raises std::runtime_error naming the line; a malformed or
/// incomplete final line is reported as truncation instead.
ReplayResult replay_log(std::istream& in);
ReplayResult replay_file(const std::string& path);

}  // namespace govsim::engine
