#include "qsba/transcript.hpp"

#include <json.hpp>

#include <set>

namespace qsba {

std::string_view to_string(ActionKind kind) {
    switch (kind) {
    case ActionKind::prepare: return "prepare";
    case ActionKind::send: return "send";
    case ActionKind::receive: return "receive";
    case ActionKind::intercept: return "intercept";
    case ActionKind::operate: return "operate";
    case ActionKind::measure: return "measure";
    case ActionKind::announce: return "announce";
    }
    return "?";
}

std::size_t Transcript::record(std::string actor, ActionKind kind, std::string payload, std::string channel) {
    const std::size_t index = events_.size();
    events_.push_back(Event{index, std::move(actor), kind, std::move(channel), std::move(payload)});
    return index;
}

std::string Transcript::send(std::string actor, std::string payload) {
    std::string channel = "q" + std::to_string(next_channel_++);
    record(std::move(actor), ActionKind::send, std::move(payload), channel);
    return channel;
}

void Transcript::receive(std::string actor, const std::string& channel, std::string payload) {
    record(std::move(actor), ActionKind::receive, std::move(payload), channel);
}

void Transcript::intercept(const std::string& channel, std::string payload) {
    record("Eve", ActionKind::intercept, std::move(payload), channel);
}

bool Transcript::sends_matched() const {
    std::set<std::string> open;
    for (const Event& e : events_) {
        if (e.kind == ActionKind::send) {
            open.insert(e.channel);
        } else if (e.kind == ActionKind::receive || e.kind == ActionKind::intercept) {
            open.erase(e.channel);
        }
    }
    return open.empty();
}

std::string Transcript::to_jsonl() const {
    std::string out;
    for (const Event& e : events_) {
        nlohmann::ordered_json j;
        j["index"] = e.index;
        j["actor"] = e.actor;
        j["action"] = to_string(e.kind);
        j["channel"] = e.channel;
        j["payload"] = e.payload;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string_view to_string(QuantumAction action) {
    switch (action) {
    case QuantumAction::prepare_z: return "prepare-Z";
    case QuantumAction::measure_z: return "measure-Z";
    case QuantumAction::reflect: return "reflect";
    case QuantumAction::other: return "other";
    }
    return "?";
}

void CapabilityAudit::record(PartyId party, std::string_view stage, QuantumAction action, std::size_t count) {
    auto& entries = log_[party];
    for (AuditEntry& e : entries) {
        if (e.action == action && e.stage == stage) {
            e.count += count;
            return;
        }
    }
    entries.push_back(AuditEntry{std::string(stage), action, count});
}

std::vector<PartyId> CapabilityAudit::parties() const {
    std::vector<PartyId> out;
    for (const auto& [party, entries] : log_) {
        out.push_back(party);
    }
    return out;
}

const std::vector<AuditEntry>& CapabilityAudit::entries(PartyId party) const {
    static const std::vector<AuditEntry> empty;
    const auto it = log_.find(party);
    return it == log_.end() ? empty : it->second;
}

std::size_t CapabilityAudit::count(PartyId party, QuantumAction action) const {
    std::size_t n = 0;
    for (const AuditEntry& e : entries(party)) {
        if (e.action == action) {
            n += e.count;
        }
    }
    return n;
}

std::size_t CapabilityAudit::count(PartyId party, std::string_view stage, QuantumAction action) const {
    std::size_t n = 0;
    for (const AuditEntry& e : entries(party)) {
        if (e.action == action && e.stage == stage) {
            n += e.count;
        }
    }
    return n;
}

bool CapabilityAudit::semi_quantum(PartyId party) const { return count(party, QuantumAction::other) == 0; }

void CapabilityAudit::merge(const CapabilityAudit& other) {
    for (const auto& [party, entries] : other.log_) {
        for (const AuditEntry& e : entries) {
            record(party, e.stage, e.action, e.count);
        }
    }
}

} // namespace qsba
