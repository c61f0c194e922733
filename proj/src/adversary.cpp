#include "qsba/adversary.hpp"

namespace qsba {

std::string_view to_string(Stage stage) {
    switch (stage) {
    case Stage::distribute: return "distribute";
    case Stage::post_confirm: return "post-confirm";
    case Stage::bid_return: return "bid-return";
    case Stage::key_distribution: return "key-distribution";
    case Stage::bid_forward: return "bid-forward";
    }
    return "?";
}

void transmit(Transcript& transcript, Adversary* adversary, Link link, QubitSequence& qubits, std::string payload,
              Rng& rng) {
    link.channel = transcript.send(party_name(link.from), std::move(payload));
    if (adversary != nullptr && adversary->on_transit(link, qubits, rng)) {
        transcript.intercept(link.channel, adversary->name());
    }
    transcript.receive(party_name(link.to), link.channel);
}

} // namespace qsba
