#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scp/lattice.hpp"
#include "scp/model.hpp"

namespace scp::coupling {

/// Joint state of the sterile process xi (single type: 0, +, -) and the
/// basic contact process eta (0, +) at one site.
struct PairState {
  SiteState xi = SiteState::empty;  // empty, fertile1 or sterile1
  bool eta = false;

  friend bool operator==(const PairState&, const PairState&) = default;
};

/// The admissible pairs -0, -+, 00, 0+, ++.
const std::array<PairState, 5>& admissible_pairs() noexcept;
bool admissible(const PairState& s) noexcept;
/// Two-character label, xi first: "-0", "-+", "00", "0+", "++".
std::string pair_label(const PairState& s);

enum class CoupledEvent { plus_arrow, minus_arrow, death };
const char* to_string(CoupledEvent e) noexcept;

/// New state at the head y after an event. Arrows run from x to y and act
/// on xi with the usual rules; eta follows + arrows and deaths and ignores
/// - arrows. Throws InvariantViolation when an input pair is not admissible.
PairState coupled_step(const PairState& x, const PairState& y, CoupledEvent e);

struct ClosureRow {
  CoupledEvent event;
  PairState at_x;
  PairState at_y;
  PairState result;
  bool admissible;
};

struct ClosureReport {
  std::vector<ClosureRow> rows;  // 75 rows
  std::size_t violations = 0;
};

ClosureReport verify_table_closure();
/// CSV with header event,x,y,result,admissible.
void write_closure_csv(std::ostream& out, const ClosureReport& report);

struct CoupledConfig {
  Torus xi;
  std::vector<std::uint8_t> eta;  // 1 = occupied

  explicit CoupledConfig(Torus xi_cfg);
  PairState at(SiteIndex x) const { return {xi.at(x), eta[x] != 0}; }
  /// eta = 1 exactly where xi is fertile, or everywhere xi is occupied when
  /// `cover_sterile` is set.
  static CoupledConfig dominating(const Torus& xi_cfg, bool cover_sterile = true);
};

struct CoupledOptions {
  /// Stop after this many clock rings (0 = run to the horizon).
  std::uint64_t max_rings = 0;
  /// Keep the applied eta events, for comparison with a standalone run.
  bool record_eta_events = false;
  /// Number of trailing events included in a violation dump.
  std::size_t dump_window = 32;
};

struct CoupledRun {
  CoupledConfig terminal;
  double end_time = 0.0;
  std::uint64_t rings = 0;
  std::uint64_t xi_applied = 0;
  std::uint64_t eta_applied = 0;
  std::uint64_t checks = 0;
  std::optional<double> eta_extinction_time;
  std::optional<double> xi_fertile_extinction_time;
  /// Largest xi fertile count seen at or after eta's extinction (0 expected).
  std::size_t xi_fertile_after_eta_extinction = 0;
  std::vector<EventRecord> eta_events;
};

/// Drives xi (rates lambda, p) and eta (rate lambda p) from one graphical
/// representation: eta reads exactly the + arrows and death marks of xi.
/// After each ring the head site is checked against the admissible set;
/// an escape throws InvariantViolation whose message carries the recent
/// event history.
CoupledRun run_coupled(double lambda, double p, const CoupledConfig& init, double horizon,
                       std::uint64_t seed, const CoupledOptions& options = {});

}  // namespace scp::coupling
