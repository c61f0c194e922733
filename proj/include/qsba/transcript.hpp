#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qsba/auction.hpp"

namespace qsba {

enum class ActionKind { prepare, send, receive, intercept, operate, measure, announce };

std::string_view to_string(ActionKind kind);

struct Event {
    std::size_t index = 0;
    std::string actor;
    ActionKind kind = ActionKind::announce;
    /// Quantum channel id for send/receive/intercept events, empty otherwise.
    std::string channel;
    std::string payload;
};

/// Append-only record of one protocol run.
///
/// Per-qubit and per-round events are only kept when `detailed()` is set;
/// phase-level events, sends, receives and announcements are always kept.
class Transcript {
public:
    explicit Transcript(bool detailed = true) : detailed_(detailed) {}

    bool detailed() const noexcept { return detailed_; }

    std::size_t record(std::string actor, ActionKind kind, std::string payload, std::string channel = {});

    /// Records a send on a fresh channel id and returns the id.
    std::string send(std::string actor, std::string payload);
    void receive(std::string actor, const std::string& channel, std::string payload = {});
    void intercept(const std::string& channel, std::string payload);

    const std::vector<Event>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }

    /// Every send is followed by a receive or an intercept on the same channel.
    bool sends_matched() const;

    /// One JSON object per line: index, actor, action, channel, payload.
    std::string to_jsonl() const;

private:
    bool detailed_;
    std::size_t next_channel_ = 0;
    std::vector<Event> events_;
};

/// Quantum actions a party performed, tagged by what a classical
/// (semi-quantum) participant is allowed to do.
enum class QuantumAction { prepare_z, measure_z, reflect, other };

std::string_view to_string(QuantumAction action);

struct AuditEntry {
    std::string stage;
    QuantumAction action = QuantumAction::other;
    std::size_t count = 0;
};

/// Per-party action counts keyed by (stage, action), in order of first occurrence.
class CapabilityAudit {
public:
    void record(PartyId party, std::string_view stage, QuantumAction action, std::size_t count = 1);

    std::vector<PartyId> parties() const;
    const std::vector<AuditEntry>& entries(PartyId party) const;
    std::size_t count(PartyId party, QuantumAction action) const;
    std::size_t count(PartyId party, std::string_view stage, QuantumAction action) const;
    /// No action outside {prepare-Z, measure-Z, reflect}.
    bool semi_quantum(PartyId party) const;

    void merge(const CapabilityAudit& other);

private:
    std::map<PartyId, std::vector<AuditEntry>> log_;
};

} // namespace qsba
