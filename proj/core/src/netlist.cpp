#include "tzlab/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <queue>
#include <sstream>
#include <variant>

namespace tzlab {

std::string_view to_string(NetlistErrorKind kind) {
  switch (kind) {
    case NetlistErrorKind::Syntax: return "syntax error";
    case NetlistErrorKind::UndrivenNet: return "undriven net";
    case NetlistErrorKind::DuplicateDriver: return "duplicate driver";
    case NetlistErrorKind::UnsupportedGate: return "unsupported gate kind";
    case NetlistErrorKind::BadArity: return "bad gate arity";
    case NetlistErrorKind::CombinationalCycle: return "combinational cycle";
    case NetlistErrorKind::DuplicatePort: return "duplicate port";
    case NetlistErrorKind::UnknownNet: return "unknown net";
    case NetlistErrorKind::Precondition: return "precondition violated";
  }
  return "netlist error";
}

namespace {

std::string format_error(NetlistErrorKind kind, const std::string& message, int line, int column) {
  std::ostringstream out;
  if (line > 0) {
    out << "line " << line;
    if (column > 0) out << ", column " << column;
    out << ": ";
  }
  out << to_string(kind) << ": " << message;
  return out.str();
}

// Parses "_tz<digits>" and returns the number.
std::optional<std::uint64_t> fresh_suffix(std::string_view name) {
  constexpr std::string_view prefix = "_tz";
  if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::uint64_t value = 0;
  auto digits = name.substr(prefix.size());
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

// Kahn's algorithm; ready gates are released in ascending declaration index.
// `preds[g]` lists the gates whose outputs gate g reads combinationally.
// Returns the order, or the index of a gate left on a cycle.
std::variant<std::vector<std::size_t>, std::size_t> kahn(
    const std::vector<std::vector<std::size_t>>& preds) {
  const std::size_t n = preds.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t g = 0; g < n; ++g) {
    indegree[g] = preds[g].size();
    for (auto p : preds[g]) succ[p].push_back(g);
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t g = 0; g < n; ++g) {
    if (indegree[g] == 0) ready.push(g);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    auto g = ready.top();
    ready.pop();
    order.push_back(g);
    for (auto s : succ[g]) {
      if (--indegree[s] == 0) ready.push(s);
    }
  }
  if (order.size() != n) {
    for (std::size_t g = 0; g < n; ++g) {
      if (indegree[g] != 0) return g;
    }
  }
  return order;
}

}  // namespace

NetlistError::NetlistError(NetlistErrorKind kind, std::string message, int line, int column)
    : Error(format_error(kind, message, line, column)), kind_(kind), line_(line), column_(column) {}

// ---------------------------------------------------------------------------
// Netlist

std::optional<NetId> Netlist::find_net(std::string_view name) const {
  auto it = net_index_.find(std::string(name));
  if (it == net_index_.end()) return std::nullopt;
  return it->second;
}

NetId Netlist::net(std::string_view name) const {
  if (auto id = find_net(name)) return *id;
  throw NetlistError(NetlistErrorKind::UnknownNet, "no net named '" + std::string(name) + "'");
}

std::optional<std::size_t> Netlist::driver(NetId net) const {
  if (driver_[net] < 0) return std::nullopt;
  return static_cast<std::size_t>(driver_[net]);
}

std::span<const std::uint32_t> Netlist::readers(NetId net) const {
  return std::span<const std::uint32_t>(reader_pins_).subspan(
      reader_offsets_[net], reader_offsets_[net + 1] - reader_offsets_[net]);
}

std::uint64_t Netlist::next_fresh_index() const {
  std::uint64_t next = 0;
  for (const auto& name : net_names_) {
    if (auto n = fresh_suffix(name)) next = std::max(next, *n + 1);
  }
  return next;
}

NetlistBuilder Netlist::to_builder() const {
  NetlistBuilder builder(name_);
  for (auto in : inputs_) builder.add_input(net_names_[in]);
  for (auto out : outputs_) builder.add_output(net_names_[out]);
  for (const auto& g : gates_) {
    std::vector<std::string> ins;
    ins.reserve(g.inputs.size());
    for (auto in : g.inputs) ins.push_back(net_names_[in]);
    builder.add_gate(net_names_[g.output], g.kind, std::move(ins), g.keep);
  }
  return builder;
}

// ---------------------------------------------------------------------------
// NetlistBuilder

NetlistBuilder::NetlistBuilder(std::string name) : name_(std::move(name)) {}

NetlistBuilder& NetlistBuilder::add_input(std::string net, int line) {
  inputs_.emplace_back(std::move(net), line);
  return *this;
}

NetlistBuilder& NetlistBuilder::add_output(std::string net, int line) {
  outputs_.emplace_back(std::move(net), line);
  return *this;
}

NetlistBuilder& NetlistBuilder::add_gate(std::string output, GateKind kind,
                                         std::vector<std::string> inputs, bool keep, int line) {
  gates_.push_back(PendingGate{std::move(output), kind, std::move(inputs), keep, line});
  return *this;
}

Netlist NetlistBuilder::build() const {
  // Driver table: name -> (-1 for PI, gate declaration index otherwise).
  std::unordered_map<std::string, std::int64_t> drivers;
  drivers.reserve(inputs_.size() + gates_.size());
  for (const auto& [name, line] : inputs_) {
    if (!drivers.emplace(name, -1).second) {
      throw NetlistError(NetlistErrorKind::DuplicatePort, "input '" + name + "' declared twice",
                         line);
    }
  }
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const auto& pg = gates_[g];
    if (!arity_ok(pg.kind, pg.inputs.size())) {
      throw NetlistError(NetlistErrorKind::BadArity,
                         std::string(to_string(pg.kind)) + " driving '" + pg.output + "' has " +
                             std::to_string(pg.inputs.size()) + " inputs, expected " +
                             std::string(arity_rule(pg.kind)),
                         pg.line);
    }
    auto [it, fresh] = drivers.emplace(pg.output, static_cast<std::int64_t>(g));
    if (!fresh) {
      throw NetlistError(NetlistErrorKind::DuplicateDriver,
                         "net '" + pg.output + "' has more than one driver", pg.line);
    }
  }

  std::vector<std::vector<std::size_t>> preds(gates_.size());
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const auto& pg = gates_[g];
    for (const auto& in : pg.inputs) {
      auto it = drivers.find(in);
      if (it == drivers.end()) {
        throw NetlistError(NetlistErrorKind::UndrivenNet,
                           "net '" + in + "' read by '" + pg.output + "' has no driver", pg.line);
      }
      if (pg.kind != GateKind::Dff && it->second >= 0) {
        preds[g].push_back(static_cast<std::size_t>(it->second));
      }
    }
  }
  std::vector<std::string> seen_outputs;
  for (const auto& [name, line] : outputs_) {
    if (!drivers.contains(name)) {
      throw NetlistError(NetlistErrorKind::UndrivenNet, "output '" + name + "' has no driver",
                         line);
    }
    if (std::find(seen_outputs.begin(), seen_outputs.end(), name) != seen_outputs.end()) {
      throw NetlistError(NetlistErrorKind::DuplicatePort, "output '" + name + "' declared twice",
                         line);
    }
    seen_outputs.push_back(name);
  }

  auto sorted = kahn(preds);
  if (auto* stuck = std::get_if<std::size_t>(&sorted)) {
    const auto& pg = gates_[*stuck];
    throw NetlistError(NetlistErrorKind::CombinationalCycle,
                       "net '" + pg.output + "' lies on or behind a combinational cycle", pg.line);
  }
  const auto& order = std::get<std::vector<std::size_t>>(sorted);

  Netlist n;
  n.name_ = name_;
  const std::size_t net_total = inputs_.size() + gates_.size();
  n.net_names_.reserve(net_total);
  n.net_index_.reserve(net_total);
  auto add_net = [&](const std::string& name) {
    auto id = static_cast<NetId>(n.net_names_.size());
    n.net_names_.push_back(name);
    n.net_index_.emplace(name, id);
    return id;
  };
  for (const auto& [name, line] : inputs_) n.inputs_.push_back(add_net(name));
  for (auto g : order) add_net(gates_[g].output);

  n.driver_.assign(net_total, -1);
  n.input_pos_.assign(net_total, -1);
  n.output_count_.assign(net_total, 0);
  for (std::size_t i = 0; i < n.inputs_.size(); ++i) {
    n.input_pos_[n.inputs_[i]] = static_cast<std::int32_t>(i);
  }
  n.gates_.reserve(order.size());
  for (auto g : order) {
    const auto& pg = gates_[g];
    Gate gate;
    gate.output = n.net_index_.at(pg.output);
    gate.kind = pg.kind;
    gate.keep = pg.keep;
    gate.inputs.reserve(pg.inputs.size());
    for (const auto& in : pg.inputs) gate.inputs.push_back(n.net_index_.at(in));
    n.driver_[gate.output] = static_cast<std::int32_t>(n.gates_.size());
    if (gate.kind == GateKind::Dff) n.dffs_.push_back(static_cast<std::uint32_t>(n.gates_.size()));
    n.gates_.push_back(std::move(gate));
  }
  for (const auto& [name, line] : outputs_) {
    auto id = n.net_index_.at(name);
    n.outputs_.push_back(id);
    ++n.output_count_[id];
  }

  std::vector<std::uint32_t> counts(net_total, 0);
  for (const auto& gate : n.gates_) {
    for (auto in : gate.inputs) ++counts[in];
  }
  n.reader_offsets_.assign(net_total + 1, 0);
  for (std::size_t i = 0; i < net_total; ++i) {
    n.reader_offsets_[i + 1] = n.reader_offsets_[i] + counts[i];
  }
  n.reader_pins_.assign(n.reader_offsets_.back(), 0);
  std::vector<std::uint32_t> fill(n.reader_offsets_.begin(), n.reader_offsets_.end() - 1);
  for (std::size_t g = 0; g < n.gates_.size(); ++g) {
    for (auto in : n.gates_[g].inputs) n.reader_pins_[fill[in]++] = static_cast<std::uint32_t>(g);
  }
  return n;
}

std::vector<std::size_t> topo_order(const Netlist& netlist) {
  const auto gates = netlist.gates();
  std::vector<std::vector<std::size_t>> preds(gates.size());
  for (std::size_t g = 0; g < gates.size(); ++g) {
    if (gates[g].kind == GateKind::Dff) continue;
    for (auto in : gates[g].inputs) {
      if (auto d = netlist.driver(in)) preds[g].push_back(*d);
    }
  }
  auto sorted = kahn(preds);
  if (auto* stuck = std::get_if<std::size_t>(&sorted)) {
    throw NetlistError(NetlistErrorKind::CombinationalCycle,
                       "net '" + netlist.net_name(gates[*stuck].output) + "' lies on a cycle");
  }
  return std::get<std::vector<std::size_t>>(sorted);
}

// ---------------------------------------------------------------------------
// .bench reader / writer

namespace {

bool is_name_char(char c) {
  return !(std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ',' ||
           c == '=' || c == '#');
}

class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }
  int column() const { return static_cast<int>(pos_) + 1; }

  std::string name(const char* what) {
    skip_space();
    auto start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of line";
    throw NetlistError(NetlistErrorKind::Syntax, message + ", found " + found, line_, column());
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

struct ParsedGate {
  std::string output;
  GateKind kind;
  std::vector<std::string> inputs;
  bool keep;
  int line;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits a wide AND/NAND/OR/NOR into a left-to-right balanced tree whose inner
// nodes are AND (for AND/NAND) or OR (for OR/NOR) and whose root keeps `kind`.
void decompose(NetlistBuilder& builder, const ParsedGate& g, std::uint64_t& fresh) {
  if (g.inputs.size() <= kMaxFanin || !is_variadic(g.kind)) {
    builder.add_gate(g.output, g.kind, g.inputs, g.keep, g.line);
    return;
  }
  const GateKind inner =
      (g.kind == GateKind::And || g.kind == GateKind::Nand) ? GateKind::And : GateKind::Or;
  const std::size_t n = g.inputs.size();
  const std::size_t groups = (n + kMaxFanin - 1) / kMaxFanin;
  std::vector<std::string> root_inputs;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < groups; ++i) {
    std::size_t size = n / groups + (i < n % groups ? 1 : 0);
    std::vector<std::string> chunk(g.inputs.begin() + static_cast<std::ptrdiff_t>(begin),
                                   g.inputs.begin() + static_cast<std::ptrdiff_t>(begin + size));
    begin += size;
    if (chunk.size() == 1) {
      root_inputs.push_back(chunk.front());
      continue;
    }
    std::string name = "_tz" + std::to_string(fresh++);
    decompose(builder, ParsedGate{name, inner, std::move(chunk), false, g.line}, fresh);
    root_inputs.push_back(std::move(name));
  }
  decompose(builder, ParsedGate{g.output, g.kind, std::move(root_inputs), g.keep, g.line}, fresh);
}

}  // namespace

Netlist parse_bench(std::string_view text, std::string name) {
  NetlistBuilder builder(std::move(name));
  std::vector<ParsedGate> gates;
  std::uint64_t fresh = 0;
  auto note_name = [&fresh](std::string_view n) {
    if (auto v = fresh_suffix(n)) fresh = std::max(fresh, *v + 1);
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    bool keep = false;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) {
      keep = lower(trim(raw.substr(hash + 1))) == "keep";
      raw = raw.substr(0, hash);
    }
    if (trim(raw).empty()) {
      if (eol == text.size()) break;
      continue;
    }

    LineCursor cur(raw, line_no);
    std::string first = cur.name("a declaration");
    if (cur.accept('(')) {
      auto keyword = lower(first);
      if (keyword != "input" && keyword != "output") {
        cur.fail("expected INPUT, OUTPUT or an assignment");
      }
      std::string net = cur.name("a net name");
      cur.expect(')');
      if (!cur.at_end()) cur.fail("unexpected trailing text");
      note_name(net);
      if (keyword == "input") {
        builder.add_input(std::move(net), line_no);
      } else {
        builder.add_output(std::move(net), line_no);
      }
    } else {
      cur.expect('=');
      int kind_col = 0;
      cur.skip_space();
      kind_col = cur.column();
      std::string kind_text = cur.name("a gate kind");
      cur.expect('(');
      std::vector<std::string> ins;
      if (!cur.accept(')')) {
        do {
          ins.push_back(cur.name("a net name"));
        } while (cur.accept(','));
        cur.expect(')');
      }
      if (!cur.at_end()) cur.fail("unexpected trailing text");
      auto kind = parse_gate_kind(kind_text);
      if (!kind) {
        throw NetlistError(NetlistErrorKind::UnsupportedGate,
                           "gate kind '" + kind_text + "' is not supported", line_no, kind_col);
      }
      note_name(first);
      for (const auto& in : ins) note_name(in);
      gates.push_back(ParsedGate{std::move(first), *kind, std::move(ins), keep, line_no});
    }
    if (eol == text.size()) break;
  }
  for (const auto& g : gates) decompose(builder, g, fresh);
  return builder.build();
}

Netlist read_bench_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open netlist '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto name = path;
  if (auto slash = name.find_last_of("/\\"); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_bench(buffer.str(), name);
}

std::string write_bench(const Netlist& netlist) {
  std::string out;
  out += "# " + netlist.name() + "\n";
  for (auto in : netlist.inputs()) out += "INPUT(" + netlist.net_name(in) + ")\n";
  for (auto o : netlist.outputs()) out += "OUTPUT(" + netlist.net_name(o) + ")\n";
  for (const auto& g : netlist.gates()) {
    out += netlist.net_name(g.output);
    out += " = ";
    out += to_string(g.kind);
    out += '(';
    for (std::size_t i = 0; i < g.inputs.size(); ++i) {
      if (i) out += ", ";
      out += netlist.net_name(g.inputs[i]);
    }
    out += ')';
    if (g.keep) out += "  # keep";
    out += '\n';
  }
  return out;
}

void write_bench_file(const Netlist& netlist, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write netlist '" + path + "'");
  out << write_bench(netlist);
}

// ---------------------------------------------------------------------------
// Transformations

Netlist replace_with_constant(const Netlist& netlist, std::string_view net, bool value) {
  auto id = netlist.net(net);
  auto drv = netlist.driver(id);
  if (!drv) {
    throw NetlistError(NetlistErrorKind::Precondition,
                       "net '" + std::string(net) + "' is a primary input and cannot be replaced");
  }
  NetlistBuilder builder(netlist.name());
  for (auto in : netlist.inputs()) builder.add_input(netlist.net_name(in));
  for (auto o : netlist.outputs()) builder.add_output(netlist.net_name(o));
  const auto gates = netlist.gates();
  for (std::size_t g = 0; g < gates.size(); ++g) {
    if (g == *drv) {
      builder.add_gate(std::string(net), value ? GateKind::Const1 : GateKind::Const0, {});
      continue;
    }
    std::vector<std::string> ins;
    for (auto in : gates[g].inputs) ins.push_back(netlist.net_name(in));
    builder.add_gate(netlist.net_name(gates[g].output), gates[g].kind, std::move(ins),
                     gates[g].keep);
  }
  return builder.build();
}

std::pair<Netlist, std::vector<RemovedGate>> sweep_dead_gates(const Netlist& netlist) {
  const auto gates = netlist.gates();
  std::vector<std::uint32_t> live_readers(netlist.net_count(), 0);
  for (NetId net = 0; net < netlist.net_count(); ++net) {
    live_readers[net] = static_cast<std::uint32_t>(netlist.readers(net).size());
  }
  auto dead = [&](std::size_t g) {
    const auto& gate = gates[g];
    return !gate.keep && live_readers[gate.output] == 0 && !netlist.is_output(gate.output);
  };

  std::vector<bool> removed(gates.size(), false);
  std::vector<RemovedGate> log;
  // Reverse topological scan seeds the worklist; removals expose drivers.
  std::vector<std::size_t> stack;
  for (std::size_t g = gates.size(); g-- > 0;) {
    if (dead(g)) stack.push_back(g);
  }
  std::reverse(stack.begin(), stack.end());
  while (!stack.empty()) {
    auto g = stack.back();
    stack.pop_back();
    if (removed[g]) continue;
    removed[g] = true;
    log.push_back(RemovedGate{netlist.net_name(gates[g].output), gates[g].kind});
    for (auto in : gates[g].inputs) {
      --live_readers[in];
      if (auto d = netlist.driver(in); d && !removed[*d] && dead(*d)) stack.push_back(*d);
    }
  }
  if (log.empty()) return {netlist, {}};

  NetlistBuilder builder(netlist.name());
  for (auto in : netlist.inputs()) builder.add_input(netlist.net_name(in));
  for (auto o : netlist.outputs()) builder.add_output(netlist.net_name(o));
  for (std::size_t g = 0; g < gates.size(); ++g) {
    if (removed[g]) continue;
    std::vector<std::string> ins;
    for (auto in : gates[g].inputs) ins.push_back(netlist.net_name(in));
    builder.add_gate(netlist.net_name(gates[g].output), gates[g].kind, std::move(ins),
                     gates[g].keep);
  }
  return {builder.build(), std::move(log)};
}

Insertion insert_subcircuit(const Netlist& host, const Subcircuit& sub,
                            const std::map<std::string, std::string>& tap_bindings,
                            std::string_view target) {
  auto target_id = host.find_net(target);
  if (!target_id) {
    throw NetlistError(NetlistErrorKind::UnknownNet,
                       "insertion target '" + std::string(target) + "' does not exist");
  }
  if (host.readers(*target_id).empty() && !host.is_output(*target_id)) {
    throw NetlistError(NetlistErrorKind::Precondition,
                       "insertion target '" + std::string(target) + "' has no readers");
  }
  for (const auto& port : sub.tap_inputs) {
    auto it = tap_bindings.find(port);
    if (it == tap_bindings.end()) {
      throw NetlistError(NetlistErrorKind::UnknownNet, "tap port '" + port + "' is not bound");
    }
    if (!host.find_net(it->second)) {
      throw NetlistError(NetlistErrorKind::UnknownNet,
                         "tap port '" + port + "' bound to missing net '" + it->second + "'");
    }
  }

  std::uint64_t fresh = std::max(host.next_fresh_index(), sub.body.next_fresh_index());
  auto fresh_name = [&]() {
    for (;;) {
      auto name = "_tz" + std::to_string(fresh++);
      if (!host.find_net(name) && !sub.body.find_net(name)) return name;
    }
  };

  const bool target_is_input = host.is_input(*target_id);
  const std::string target_name(target);
  // Host net that carries the original target value after insertion.
  const std::string original = target_is_input ? target_name : fresh_name();

  Insertion result;
  result.original_target = original;
  auto& renamed = result.renamed;
  for (const auto& port : sub.tap_inputs) {
    const auto& bound = tap_bindings.at(port);
    renamed[port] = bound == target_name ? original : bound;
  }
  renamed[sub.payload_in] = original;
  for (const auto& g : sub.body.gates()) {
    const auto& local = sub.body.net_name(g.output);
    if (local == sub.payload_out && !target_is_input) {
      renamed[local] = target_name;
    } else {
      renamed[local] = fresh_name();
    }
  }
  const std::string& payload_out = renamed.at(sub.payload_out);

  NetlistBuilder builder(host.name());
  for (auto in : host.inputs()) builder.add_input(host.net_name(in));
  for (auto o : host.outputs()) builder.add_output(host.net_name(o));
  for (const auto& g : host.gates()) {
    std::string out = host.net_name(g.output);
    if (g.output == *target_id) out = original;
    std::vector<std::string> ins;
    for (auto in : g.inputs) {
      if (in == *target_id && target_is_input) {
        ins.push_back(payload_out);
      } else if (in == *target_id) {
        ins.push_back(target_name);
      } else {
        ins.push_back(host.net_name(in));
      }
    }
    builder.add_gate(std::move(out), g.kind, std::move(ins), g.keep);
  }
  for (const auto& g : sub.body.gates()) {
    std::vector<std::string> ins;
    for (auto in : g.inputs) ins.push_back(renamed.at(sub.body.net_name(in)));
    builder.add_gate(renamed.at(sub.body.net_name(g.output)), g.kind, std::move(ins), g.keep);
  }
  try {
    result.netlist = builder.build();
  } catch (const NetlistError& e) {
    if (e.kind() == NetlistErrorKind::DuplicateDriver) {
      throw std::logic_error(std::string("insert_subcircuit produced a name collision: ") +
                             e.what());
    }
    throw;
  }
  return result;
}

std::vector<std::size_t> fanin_cone(const Netlist& netlist, std::span<const NetId> roots) {
  std::vector<bool> in_cone(netlist.gate_count(), false);
  std::vector<NetId> stack(roots.begin(), roots.end());
  std::vector<bool> visited(netlist.net_count(), false);
  while (!stack.empty()) {
    auto net = stack.back();
    stack.pop_back();
    if (visited[net]) continue;
    visited[net] = true;
    if (auto d = netlist.driver(net)) {
      in_cone[*d] = true;
      for (auto in : netlist.gate(*d).inputs) stack.push_back(in);
    }
  }
  std::vector<std::size_t> cone;
  for (std::size_t g = 0; g < in_cone.size(); ++g) {
    if (in_cone[g]) cone.push_back(g);
  }
  return cone;
}

std::vector<bool> reaches_output(const Netlist& netlist) {
  std::vector<bool> reach(netlist.net_count(), false);
  std::vector<NetId> stack(netlist.outputs().begin(), netlist.outputs().end());
  while (!stack.empty()) {
    auto net = stack.back();
    stack.pop_back();
    if (reach[net]) continue;
    reach[net] = true;
    if (auto d = netlist.driver(net)) {
      for (auto in : netlist.gate(*d).inputs) stack.push_back(in);
    }
  }
  return reach;
}

std::vector<bool> fanout_closure(const Netlist& netlist, NetId source) {
  std::vector<bool> reach(netlist.net_count(), false);
  std::vector<NetId> stack{source};
  while (!stack.empty()) {
    auto net = stack.back();
    stack.pop_back();
    if (reach[net]) continue;
    reach[net] = true;
    for (auto g : netlist.readers(net)) stack.push_back(netlist.gate(g).output);
  }
  return reach;
}

}  // namespace tzlab
