#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlchns/chns.hpp"
#include "nlchns/gronwall.hpp"

namespace nlchns {

inline constexpr const char* kVersion = "0.1.0";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "# nlchns <version>" followed by the column header and %.17g rows
void write_ledger_csv(std::ostream& os, const std::vector<EnergyLedgerEntry>& ledger);
void write_ledger_csv(const std::string& path, const std::vector<EnergyLedgerEntry>& ledger);
std::vector<EnergyLedgerEntry> read_ledger_csv(const std::string& path);

void write_signal_csv(const std::string& path, const SampledSignal& s, const std::string& value_name = "value");
// requires uniformly spaced t
SampledSignal read_signal_csv(const std::string& path);

std::vector<char> snapshot_bytes(const FlowState& s);
FlowState snapshot_from_bytes(const std::vector<char>& bytes);
void write_snapshot(const std::string& path, const FlowState& s);
FlowState read_snapshot(const std::string& path);

void write_text(const std::string& path, const std::string& text);

}  // namespace nlchns
