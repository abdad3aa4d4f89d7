#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bnstrat/error.hpp"
#include "bnstrat/model.hpp"

namespace bnstrat {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view tok, std::size_t line) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(x)) {
    throw ParseError(line, "expected a probability, got '" + std::string(tok) + "'");
  }
  return x;
}

long parse_int(std::string_view tok, std::size_t line, const char* what) {
  long x = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
  }
  return x;
}

std::string format_real(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Network load_network(std::string_view text) {
  std::string name;
  std::vector<Variable> vars;
  std::vector<std::vector<VarId>> parents;
  std::vector<std::vector<double>> entries;
  std::vector<bool> has_parents_line, has_cpt;

  auto lookup = [&](std::string_view var_name, std::size_t line) -> VarId {
    for (const Variable& v : vars)
      if (v.name == var_name) return v.id;
    throw ParseError(line, "undeclared variable '" + std::string(var_name) + "'");
  };
  auto rows_of = [&](VarId v) {
    std::size_t rows = 1;
    for (VarId p : parents[v]) rows *= vars[p].arity;
    return rows;
  };

  // Table currently being read, with the line it started on.
  std::optional<VarId> open_cpt;
  std::size_t open_line = 0;
  auto close_cpt = [&](std::size_t line) {
    if (!open_cpt) return;
    const VarId v = *open_cpt;
    const std::size_t want = rows_of(v) * vars[v].arity;
    if (entries[v].size() != want) {
      throw ParseError(line, "table of " + vars[v].name + " (from line " + std::to_string(open_line) +
                                 ") has " + std::to_string(entries[v].size() / vars[v].arity) +
                                 " rows, expected " + std::to_string(rows_of(v)));
    }
    open_cpt.reset();
  };

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    const auto tok = tokenize(raw);
    if (tok.empty()) continue;

    const std::string_view kw = tok[0];
    if (kw == "net") {
      if (!name.empty() || !vars.empty()) throw ParseError(lineno, "duplicate 'net' line");
      if (tok.size() != 2) throw ParseError(lineno, "expected 'net <name>'");
      name = tok[1];
    } else if (name.empty()) {
      throw ParseError(lineno, "file must start with 'net <name>'");
    } else if (kw == "var") {
      close_cpt(lineno);
      if (tok.size() != 3) throw ParseError(lineno, "expected 'var <name> <arity>'");
      for (const Variable& v : vars)
        if (v.name == tok[1]) throw ParseError(lineno, "variable '" + std::string(tok[1]) + "' declared twice");
      const long arity = parse_int(tok[2], lineno, "an arity");
      if (arity < 2) throw ParseError(lineno, "arity must be at least 2");
      vars.push_back(Variable{vars.size(), std::string(tok[1]), static_cast<std::size_t>(arity)});
      parents.emplace_back();
      entries.emplace_back();
      has_parents_line.push_back(false);
      has_cpt.push_back(false);
    } else if (kw == "parents") {
      close_cpt(lineno);
      if (tok.size() < 2) throw ParseError(lineno, "expected 'parents <name> <p1> ...'");
      const VarId v = lookup(tok[1], lineno);
      if (has_parents_line[v]) throw ParseError(lineno, "parents of " + vars[v].name + " given twice");
      if (has_cpt[v]) throw ParseError(lineno, "parents of " + vars[v].name + " must precede its table");
      has_parents_line[v] = true;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const VarId p = lookup(tok[i], lineno);
        for (VarId q : parents[v])
          if (q == p) throw ParseError(lineno, "parent '" + std::string(tok[i]) + "' listed twice");
        parents[v].push_back(p);
      }
    } else if (kw == "cpt") {
      close_cpt(lineno);
      if (tok.size() != 2) throw ParseError(lineno, "expected 'cpt <name>'");
      const VarId v = lookup(tok[1], lineno);
      if (has_cpt[v]) throw ParseError(lineno, "table of " + vars[v].name + " given twice");
      has_cpt[v] = true;
      open_cpt = v;
      open_line = lineno;
    } else if (open_cpt) {
      const VarId v = *open_cpt;
      if (tok.size() != vars[v].arity) {
        throw ParseError(lineno, "row of " + vars[v].name + " needs " + std::to_string(vars[v].arity) +
                                     " probabilities");
      }
      if (entries[v].size() >= rows_of(v) * vars[v].arity) {
        throw ParseError(lineno, "too many rows in table of " + vars[v].name);
      }
      double sum = 0.0;
      for (std::string_view t : tok) {
        const double p = parse_real(t, lineno);
        if (p < 0.0 || p > 1.0) throw ParseError(lineno, "probability outside [0,1]");
        sum += p;
        entries[v].push_back(p);
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        throw ParseError(lineno, "row sums to " + format_real(sum) + ", not 1");
      }
    } else {
      throw ParseError(lineno, "unknown keyword '" + std::string(kw) + "'");
    }
  }
  close_cpt(lineno);
  if (name.empty()) throw ParseError(0, "empty network file");
  if (vars.empty()) throw ParseError(0, "network declares no variables");

  std::vector<Cpt> cpts;
  for (VarId v = 0; v < vars.size(); ++v) {
    if (!has_cpt[v]) throw ParseError(0, "variable " + vars[v].name + " has no table");
    std::vector<std::size_t> arities;
    for (VarId p : parents[v]) arities.push_back(vars[p].arity);
    cpts.emplace_back(vars[v].arity, std::move(arities), std::move(entries[v]));
  }
  try {
    return Network(std::move(name), std::move(vars), std::move(parents), std::move(cpts));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
}

std::string save_network(const Network& net) {
  std::ostringstream out;
  out << "net " << net.name() << '\n';
  for (const Variable& v : net.variables()) out << "var " << v.name << ' ' << v.arity << '\n';
  for (VarId v = 0; v < net.size(); ++v) {
    if (net.parents(v).empty()) continue;
    out << "parents " << net.variable(v).name;
    for (VarId p : net.parents(v)) out << ' ' << net.variable(p).name;
    out << '\n';
  }
  for (VarId v = 0; v < net.size(); ++v) {
    out << "cpt " << net.variable(v).name << '\n';
    const Cpt& cpt = net.cpt(v);
    for (std::size_t r = 0; r < cpt.rows(); ++r) {
      const auto row = cpt.row(r);
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << format_real(row[k]);
      out << '\n';
    }
  }
  return out.str();
}

Network load_network_file(const std::string& path) { return load_network(read_file(path)); }

Evidence load_evidence(std::string_view text, const Network& net) {
  Evidence ev;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto tok = tokenize(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++lineno;
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ParseError(lineno, "expected '<name> <value-index>'");
    const auto var = net.find(tok[0]);
    if (!var) throw ParseError(lineno, "unknown variable '" + std::string(tok[0]) + "'");
    const long value = parse_int(tok[1], lineno, "a value index");
    if (value < 0 || static_cast<std::size_t>(value) >= net.arity(*var)) {
      throw ParseError(lineno, "value " + std::string(tok[1]) + " out of range for " + std::string(tok[0]));
    }
    if (ev.observed(*var)) throw ParseError(lineno, "variable '" + std::string(tok[0]) + "' observed twice");
    ev.set(*var, static_cast<Value>(value));
  }
  return ev;
}

std::string save_evidence(const Evidence& ev, const Network& net) {
  std::ostringstream out;
  for (auto [var, value] : ev) out << net.variable(var).name << ' ' << value << '\n';
  return out.str();
}

Evidence load_evidence_file(const std::string& path, const Network& net) {
  return load_evidence(read_file(path), net);
}

}  // namespace bnstrat
