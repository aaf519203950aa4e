#include "scp/coupling.hpp"

#include <deque>
#include <ostream>
#include <sstream>

#include "scp/errors.hpp"
#include "scp/event_scheduler.hpp"
#include "scp/format.hpp"

namespace scp::coupling {

const std::array<PairState, 5>& admissible_pairs() noexcept {
  static const std::array<PairState, 5> pairs{{
      {SiteState::sterile1, false},
      {SiteState::sterile1, true},
      {SiteState::empty, false},
      {SiteState::empty, true},
      {SiteState::fertile1, true},
  }};
  return pairs;
}

bool admissible(const PairState& s) noexcept {
  for (const auto& a : admissible_pairs()) {
    if (a == s) return true;
  }
  return false;
}

std::string pair_label(const PairState& s) {
  std::string out;
  switch (s.xi) {
    case SiteState::empty: out += '0'; break;
    case SiteState::fertile1: out += '+'; break;
    case SiteState::sterile1: out += '-'; break;
    default: out += '?'; break;
  }
  out += s.eta ? '+' : '0';
  return out;
}

const char* to_string(CoupledEvent e) noexcept {
  switch (e) {
    case CoupledEvent::plus_arrow: return "plus-arrow";
    case CoupledEvent::minus_arrow: return "minus-arrow";
    case CoupledEvent::death: return "death";
  }
  return "?";
}

PairState coupled_step(const PairState& x, const PairState& y, CoupledEvent e) {
  if (!admissible(x) || !admissible(y)) {
    throw InvariantViolation("coupled_step: input pair " + pair_label(admissible(x) ? y : x) +
                             " is not admissible");
  }
  PairState out = y;
  switch (e) {
    case CoupledEvent::death:
      out.xi = SiteState::empty;
      out.eta = false;
      break;
    case CoupledEvent::plus_arrow:
      if (x.xi == SiteState::fertile1 && y.xi == SiteState::empty) out.xi = SiteState::fertile1;
      if (x.eta && !y.eta) out.eta = true;
      break;
    case CoupledEvent::minus_arrow:
      if (x.xi == SiteState::fertile1 && y.xi == SiteState::empty) out.xi = SiteState::sterile1;
      break;
  }
  return out;
}

ClosureReport verify_table_closure() {
  ClosureReport report;
  for (CoupledEvent e : {CoupledEvent::plus_arrow, CoupledEvent::minus_arrow, CoupledEvent::death}) {
    for (const auto& x : admissible_pairs()) {
      for (const auto& y : admissible_pairs()) {
        const PairState r = coupled_step(x, y, e);
        const bool ok = admissible(r);
        report.rows.push_back({e, x, y, r, ok});
        if (!ok) ++report.violations;
      }
    }
  }
  return report;
}

void write_closure_csv(std::ostream& out, const ClosureReport& report) {
  out << "event,x,y,result,admissible\n";
  for (const auto& row : report.rows) {
    out << to_string(row.event) << ',' << pair_label(row.at_x) << ',' << pair_label(row.at_y)
        << ',' << pair_label(row.result) << ',' << (row.admissible ? 1 : 0) << '\n';
  }
}

CoupledConfig::CoupledConfig(Torus xi_cfg) : xi(std::move(xi_cfg)), eta(xi.size(), 0) {}

CoupledConfig CoupledConfig::dominating(const Torus& xi_cfg, bool cover_sterile) {
  CoupledConfig cc(xi_cfg);
  for (SiteIndex x = 0; x < xi_cfg.size(); ++x) {
    const SiteState s = xi_cfg.at(x);
    if (type_of(s) == 2) throw ConfigError("coupled runs take a single-type configuration");
    cc.eta[x] = s == SiteState::fertile1 || (cover_sterile && s == SiteState::sterile1);
  }
  return cc;
}

namespace {

EventScheduler::Activity joint_activity(const CoupledConfig& cc, SiteIndex x) {
  const SiteState s = cc.xi.at(x);
  const bool eta = cc.eta[x] != 0;
  return {is_occupied(s) || eta, s == SiteState::fertile1 || eta, false};
}

std::string describe(const EventRecord& ev) {
  std::ostringstream os;
  os << format_double(ev.time) << ' ' << event_kind_name(ev.kind) << ' ' << ev.from << "->"
     << ev.to;
  return os.str();
}

}  // namespace

CoupledRun run_coupled(double lambda, double p, const CoupledConfig& init, double horizon,
                       std::uint64_t seed, const CoupledOptions& options) {
  const ModelParams params{lambda, 0.0, p, 1.0};
  params.validate(false);
  if (!(horizon > 0.0) || std::isinf(horizon)) throw ConfigError("horizon must be a positive finite time");
  if (init.eta.size() != init.xi.size()) throw ConfigError("eta and xi sizes differ");

  CoupledRun run{init, 0.0, 0, 0, 0, 0, std::nullopt, std::nullopt, 0, {}};
  CoupledConfig& cc = run.terminal;
  for (SiteIndex x = 0; x < cc.xi.size(); ++x) {
    if (type_of(cc.xi.at(x)) == 2) throw ConfigError("coupled runs take a single-type configuration");
    if (!admissible(cc.at(x))) {
      throw ConfigError("initial pair " + pair_label(cc.at(x)) + " at site " + std::to_string(x) +
                        " is not admissible (need xi <= eta)");
    }
  }

  EventScheduler sched(cc.xi.shared_geometry(), params, seed);
  std::size_t eta_count = 0, xi_fertile = 0;
  for (SiteIndex x = 0; x < cc.xi.size(); ++x) {
    sched.set_activity(x, joint_activity(cc, x), 0.0);
    eta_count += cc.eta[x];
    xi_fertile += cc.xi.at(x) == SiteState::fertile1;
  }
  if (eta_count == 0) run.eta_extinction_time = 0.0;
  if (xi_fertile == 0) run.xi_fertile_extinction_time = 0.0;
  run.xi_fertile_after_eta_extinction = run.eta_extinction_time ? xi_fertile : 0;

  std::deque<EventRecord> recent;
  run.end_time = horizon;
  while (auto ev = sched.pop(horizon)) {
    ++run.rings;
    if (options.dump_window > 0) {
      recent.push_back(*ev);
      if (recent.size() > options.dump_window) recent.pop_front();
    }
    const SiteIndex y = ev->to;
    const PairState before = cc.at(y);
    CoupledEvent kind = CoupledEvent::death;
    if (ev->kind == EventKind::arrow_fertile1) kind = CoupledEvent::plus_arrow;
    else if (ev->kind == EventKind::arrow_sterile1) kind = CoupledEvent::minus_arrow;
    const PairState after = coupled_step(cc.at(ev->from), before, kind);
    ++run.checks;
    if (!admissible(after)) {
      std::ostringstream os;
      os << "coupling left the admissible set at site " << y << ": " << pair_label(before)
         << " -> " << pair_label(after) << "\nrecent events:\n";
      for (const auto& r : recent) os << "  " << describe(r) << '\n';
      throw InvariantViolation(os.str());
    }
    if (after == before) {
      if (options.max_rings != 0 && run.rings >= options.max_rings) {
        run.end_time = ev->time;
        break;
      }
      continue;
    }
    if (after.xi != before.xi) {
      ++run.xi_applied;
      xi_fertile += (after.xi == SiteState::fertile1) - (before.xi == SiteState::fertile1);
      if (xi_fertile == 0 && !run.xi_fertile_extinction_time) run.xi_fertile_extinction_time = ev->time;
    }
    if (after.eta != before.eta) {
      ++run.eta_applied;
      eta_count = after.eta ? eta_count + 1 : eta_count - 1;
      if (options.record_eta_events) run.eta_events.push_back(*ev);
      if (eta_count == 0 && !run.eta_extinction_time) run.eta_extinction_time = ev->time;
    }
    cc.xi.set(y, after.xi);
    cc.eta[y] = after.eta;
    if (run.eta_extinction_time) {
      run.xi_fertile_after_eta_extinction = std::max(run.xi_fertile_after_eta_extinction, xi_fertile);
    }
    sched.set_activity(y, joint_activity(cc, y), ev->time);
    if (options.max_rings != 0 && run.rings >= options.max_rings) {
      run.end_time = ev->time;
      break;
    }
  }
  return run;
}

}  // namespace scp::coupling
