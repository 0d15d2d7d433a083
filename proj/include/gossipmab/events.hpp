#pragma once
// Append-only event log of one simulated trial, plus offline consistency
// checks. The engine records every contact, block, election, and active-set
// change; verify_event_log() then audits the log without access to engine
// internals, so a protocol bug cannot hide behind the code that produced it.

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gossipmab/protocol.hpp"

namespace gossipmab {

struct ContactRecord {
  long long phase;
  int asker;
  int peer;
  int rec;
  bool operator==(const ContactRecord&) const = default;
};

struct BlockRecord {
  long long phase;
  int blocker;
  int blocked;
  long long until_phase;  // inclusive
  bool operator==(const BlockRecord&) const = default;
};

struct ElectionRecord {
  long long phase;
  int agent;
  int most_played;  // B_j
  bool operator==(const ElectionRecord&) const = default;
};

struct ActiveChangeRecord {
  long long phase;
  int agent;
  int dropped;
  int added;
  bool operator==(const ActiveChangeRecord&) const = default;
};

struct EventLog {
  std::vector<ContactRecord> contacts;
  std::vector<BlockRecord> blocks;
  std::vector<ElectionRecord> elections;
  std::vector<ActiveChangeRecord> active_changes;

  bool operator==(const EventLog&) const = default;

  std::size_t total_records() const {
    return contacts.size() + blocks.size() + elections.size() + active_changes.size();
  }
};

struct Violation {
  std::string check;   // "blocked-contact", "unjustified-change", ...
  std::string detail;
};

// Audits one trial's log:
//   (a) no contact names a peer inside one of the asker's block windows
//   (b) every active-set change has a same-phase contact recommending the
//       arm it added
//   (c) every block at phase j follows a phase j-1 contact with that peer
//       whose recommendation differs from the blocker's phase-j election,
//       and the window ends exactly at ceil(j^eta)
//   (d) consecutive blocks of the same (blocker, blocked) pair are spaced:
//       the later block phase exceeds the earlier window's end
inline std::vector<Violation> verify_event_log(const EventLog& log, double eta) {
  std::vector<Violation> out;
  const auto flag = [&out](const char* check, const std::string& detail) {
    out.push_back(Violation{check, detail});
  };

  // contacts indexed two ways: by (asker, peer) -> phases, by (phase, asker)
  std::map<std::pair<int, int>, std::vector<long long>> contact_phases;
  std::map<std::pair<long long, int>, const ContactRecord*> contact_at;
  for (const auto& c : log.contacts) {
    contact_phases[{c.asker, c.peer}].push_back(c.phase);
    contact_at[{c.phase, c.asker}] = &c;
  }
  std::map<std::pair<long long, int>, int> election_at;  // (phase, agent) -> B_j
  for (const auto& e : log.elections) election_at[{e.phase, e.agent}] = e.most_played;

  // (a) block windows exclude contact, including the block's own phase
  for (const auto& b : log.blocks) {
    const auto it = contact_phases.find({b.blocker, b.blocked});
    if (it == contact_phases.end()) continue;
    for (const long long p : it->second) {
      if (p >= b.phase && p <= b.until_phase) {
        std::ostringstream os;
        os << "agent " << b.blocker << " contacted peer " << b.blocked
           << " at phase " << p << " inside block window [" << b.phase << ", "
           << b.until_phase << "]";
        flag("blocked-contact", os.str());
      }
    }
  }

  // (b) active-set changes trace back to a recommendation
  for (const auto& ch : log.active_changes) {
    const auto it = contact_at.find({ch.phase, ch.agent});
    if (it == contact_at.end() || it->second->rec != ch.added) {
      std::ostringstream os;
      os << "agent " << ch.agent << " added arm " << ch.added << " at phase "
         << ch.phase << " without a matching recommendation";
      flag("unjustified-change", os.str());
    }
  }

  // (c) blocks trace back to a disagreeing recommendation
  for (const auto& b : log.blocks) {
    const auto cit = contact_at.find({b.phase - 1, b.blocker});
    if (cit == contact_at.end() || cit->second->peer != b.blocked) {
      std::ostringstream os;
      os << "block of peer " << b.blocked << " by agent " << b.blocker
         << " at phase " << b.phase << " has no phase-" << (b.phase - 1)
         << " contact with that peer";
      flag("unfounded-block", os.str());
      continue;
    }
    const auto eit = election_at.find({b.phase, b.blocker});
    if (eit == election_at.end() || eit->second == cit->second->rec) {
      std::ostringstream os;
      os << "block of peer " << b.blocked << " by agent " << b.blocker
         << " at phase " << b.phase
         << " despite an agreeing (or missing) election";
      flag("unfounded-block", os.str());
    }
    if (b.until_phase != ceil_pow(b.phase, eta)) {
      std::ostringstream os;
      os << "block at phase " << b.phase << " ends at " << b.until_phase
         << ", expected ceil(j^eta) = " << ceil_pow(b.phase, eta);
      flag("wrong-window", os.str());
    }
  }

  // (d) re-blocks only after the previous window expired
  std::map<std::pair<int, int>, std::vector<const BlockRecord*>> blocks_by_pair;
  for (const auto& b : log.blocks) blocks_by_pair[{b.blocker, b.blocked}].push_back(&b);
  for (auto& [pair, recs] : blocks_by_pair) {
    std::sort(recs.begin(), recs.end(),
              [](const BlockRecord* x, const BlockRecord* y) { return x->phase < y->phase; });
    for (std::size_t i = 1; i < recs.size(); ++i) {
      if (recs[i]->phase <= recs[i - 1]->until_phase) {
        std::ostringstream os;
        os << "agent " << pair.first << " re-blocked peer " << pair.second
           << " at phase " << recs[i]->phase
           << " inside the previous window ending " << recs[i - 1]->until_phase;
        flag("early-reblock", os.str());
      }
    }
  }

  return out;
}

}  // namespace gossipmab
