#include "tzlab/costmodel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tzlab/logicsim.hpp"

namespace tzlab {

namespace {

using nlohmann::json;

CellCost scaled(CellCost c, std::int64_t k) { return {c.area * k, c.leak * k, c.e_toggle * k}; }

CellCost from_ge(double ge) {
  // leak and e_toggle are fixed multiples of area in the default library
  Micro a = to_micro(ge);
  return {a, a / 2, a};
}

CellCost read_cost(const json& j, const std::string& where) {
  CellCost c;
  try {
    c.area = to_micro(j.at("area_ge").get<double>());
    c.leak = to_micro(j.at("leak").get<double>());
    c.e_toggle = to_micro(j.at("e_toggle").get<double>());
  } catch (const json::exception& e) {
    throw Error("cell library: " + where + ": " + e.what());
  }
  return c;
}

json write_cost(const CellCost& c) {
  return {{"area_ge", from_micro(c.area)}, {"leak", from_micro(c.leak)}, {"e_toggle", from_micro(c.e_toggle)}};
}

void check_cost(GateKind kind, const CellCost& c) {
  bool zero = c.area == 0 && c.leak == 0 && c.e_toggle == 0;
  bool positive = c.area > 0 && c.leak > 0 && c.e_toggle > 0;
  if (is_constant(kind) ? !zero : !positive)
    throw Error("cell library: bad entry for " + std::string(to_string(kind)));
}

}  // namespace

Micro to_micro(double value) { return static_cast<Micro>(std::llround(value * kMicro)); }

CellLibrary CellLibrary::default_library() {
  CellLibrary lib;
  lib.set(GateKind::Nand, from_ge(1.0));
  lib.set(GateKind::Nor, from_ge(1.0));
  lib.set(GateKind::Not, from_ge(0.67));
  lib.set(GateKind::Buff, from_ge(0.67));
  lib.set(GateKind::And, from_ge(1.33));
  lib.set(GateKind::Or, from_ge(1.33));
  lib.set(GateKind::Xor, from_ge(2.33));
  lib.set(GateKind::Xnor, from_ge(2.33));
  lib.set(GateKind::Mux2, from_ge(2.33));
  lib.set(GateKind::Dff, from_ge(4.33));
  lib.set(GateKind::Const0, CellCost{});
  lib.set(GateKind::Const1, CellCost{});
  return lib;
}

void CellLibrary::set(GateKind kind, CellCost cost) {
  check_cost(kind, cost);
  base_[static_cast<std::size_t>(kind)] = cost;
}

void CellLibrary::set(GateKind kind, std::size_t fanin, CellCost cost) {
  check_cost(kind, cost);
  overrides_[{kind, fanin}] = cost;
}

CellCost CellLibrary::cost(GateKind kind, std::size_t fanin) const {
  if (auto it = overrides_.find({kind, fanin}); it != overrides_.end()) return it->second;
  const auto& base = base_[static_cast<std::size_t>(kind)];
  if (!base) throw Error("cell library has no entry for " + std::string(to_string(kind)));
  if (is_variadic(kind) && fanin > 2) return scaled(*base, static_cast<std::int64_t>(fanin) - 1);
  return *base;
}

CellLibrary CellLibrary::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("cell library: ") + e.what());
  }
  if (!doc.is_object()) throw Error("cell library: expected an object");
  CellLibrary lib;
  for (const auto& [key, entry] : doc.items()) {
    auto kind = parse_gate_kind(key);
    if (!kind) throw Error("cell library: unknown gate kind '" + key + "'");
    lib.set(*kind, read_cost(entry, key));
    if (entry.contains("fanin")) {
      for (const auto& [k, sub] : entry.at("fanin").items()) {
        std::size_t fanin = 0;
        try {
          fanin = std::stoul(k);
        } catch (const std::exception&) {
          throw Error("cell library: " + key + ": bad fan-in '" + k + "'");
        }
        lib.set(*kind, fanin, read_cost(sub, key + "/" + k));
      }
    }
  }
  return lib;
}

CellLibrary CellLibrary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string CellLibrary::to_json() const {
  json doc = json::object();
  for (std::size_t k = 0; k < kGateKindCount; ++k) {
    if (!base_[k]) continue;
    auto kind = static_cast<GateKind>(k);
    json entry = write_cost(*base_[k]);
    for (const auto& [key, c] : overrides_)
      if (key.first == kind) entry["fanin"][std::to_string(key.second)] = write_cost(c);
    doc[std::string(to_string(kind))] = entry;
  }
  return doc.dump(2);
}

std::vector<GateCost> gate_costs(const Netlist& netlist, const CellLibrary& lib,
                                 std::span<const std::uint64_t> toggles) {
  if (!toggles.empty() && toggles.size() < netlist.net_count())
    throw Error("toggle map does not cover every net");
  std::vector<GateCost> out(netlist.gate_count());
  for (std::size_t g = 0; g < netlist.gate_count(); ++g) {
    const Gate& gate = netlist.gate(g);
    CellCost c = lib.cost(gate.kind, gate.inputs.size());
    out[g].area = c.area;
    out[g].leak = c.leak;
    if (!toggles.empty()) out[g].dyn = static_cast<Micro>(toggles[gate.output]) * c.e_toggle;
  }
  return out;
}

CostReport sum_costs(std::span<const GateCost> costs, std::span<const std::size_t> gates,
                     const CostReport& workload_template) {
  CostReport r;
  r.steps = workload_template.steps;
  r.workload_id = workload_template.workload_id;
  r.workload_count = workload_template.workload_count;
  for (std::size_t g : gates) {
    r.area_u += costs[g].area;
    r.leak_u += costs[g].leak;
    r.dyn_u += costs[g].dyn;
  }
  return r;
}

double area(const Netlist& netlist, const CellLibrary& lib) {
  Micro total = 0;
  for (const auto& g : netlist.gates()) total += lib.cost(g.kind, g.inputs.size()).area;
  return from_micro(total);
}

double leakage(const Netlist& netlist, const CellLibrary& lib) {
  Micro total = 0;
  for (const auto& g : netlist.gates()) total += lib.cost(g.kind, g.inputs.size()).leak;
  return from_micro(total);
}

double dynamic(std::span<const std::uint64_t> toggles, const Netlist& netlist, const CellLibrary& lib,
               std::size_t steps) {
  if (steps < 2) throw Error("dynamic power needs at least two steps");
  if (toggles.size() < netlist.net_count()) throw Error("toggle map does not cover every net");
  Micro total = 0;
  for (const auto& g : netlist.gates())
    total += static_cast<Micro>(toggles[g.output]) * lib.cost(g.kind, g.inputs.size()).e_toggle;
  return static_cast<double>(total) / static_cast<double>(steps - 1) / kMicro;
}

CostReport cost_report(const Netlist& netlist, const CellLibrary& lib, const Workload& workload) {
  CostReport tmpl;
  tmpl.workload_id = workload.id;
  tmpl.workload_count = workload.patterns.count();
  tmpl.steps = workload.patterns.count() >= 2 ? static_cast<std::int64_t>(workload.patterns.count() - 1) : 1;
  std::vector<std::uint64_t> toggles;
  if (workload.patterns.count() >= 2) toggles = toggle_counts(netlist, workload.patterns);
  auto costs = gate_costs(netlist, lib, toggles);
  std::vector<std::size_t> all(costs.size());
  for (std::size_t g = 0; g < all.size(); ++g) all[g] = g;
  return sum_costs(costs, all, tmpl);
}

DeltaReport delta(const CostReport& reference, const CostReport& subject) {
  if (reference.workload_id != subject.workload_id || reference.workload_count != subject.workload_count)
    throw InterfaceError("cost reports use different workloads ('" + reference.workload_id + "' vs '" +
                         subject.workload_id + "')");
  DeltaReport d;
  d.d_dyn = reference.p_dyn() - subject.p_dyn();
  d.d_leak = reference.p_leak() - subject.p_leak();
  d.d_total = d.d_dyn + d.d_leak;
  d.d_area = reference.area_ge() - subject.area_ge();
  auto frac = [](double diff, double ref) { return ref == 0 ? 0.0 : diff / ref; };
  d.f_total = frac(d.d_total, reference.p_total());
  d.f_dyn = frac(d.d_dyn, reference.p_dyn());
  d.f_leak = frac(d.d_leak, reference.p_leak());
  d.f_area = frac(d.d_area, reference.area_ge());
  return d;
}

std::string cost_json(const CostReport& r) {
  json j = {{"area_ge", r.area_ge()},
            {"p_leak", r.p_leak()},
            {"p_dyn", r.p_dyn()},
            {"p_total", r.p_total()},
            {"workload", {{"id", r.workload_id}, {"count", r.workload_count}}}};
  return j.dump(2);
}

std::string delta_json(const DeltaReport& d) {
  json j = {{"d_total", d.d_total}, {"d_dyn", d.d_dyn}, {"d_leak", d.d_leak}, {"d_area", d.d_area},
            {"fraction",
             {{"d_total", d.f_total}, {"d_dyn", d.f_dyn}, {"d_leak", d.f_leak}, {"d_area", d.f_area}}}};
  return j.dump(2);
}

}  // namespace tzlab
