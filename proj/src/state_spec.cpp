#include "yrast/state_spec.hpp"

#include <algorithm>
#include <cstdlib>

#include "yrast/errors.hpp"
#include "yrast/wavefunction.hpp"

namespace yrast {

namespace {

bool parse_int(const std::string& s, int& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  out = static_cast<int>(v);
  return true;
}

}  // namespace

int StateSpec::integer(const std::string& key) const {
  const auto it = fields.find(key);
  if (it == fields.end()) throw InvalidArgument("state spec '" + kind + "' needs " + key + "=");
  int v;
  if (!parse_int(it->second, v)) throw InvalidArgument("state spec: " + key + " must be an integer");
  return v;
}

double StateSpec::real(const std::string& key, double fallback) const {
  const auto it = fields.find(key);
  if (it == fields.end()) return fallback;
  char* end = nullptr;
  const double v = std::strtod(it->second.c_str(), &end);
  if (it->second.empty() || end != it->second.c_str() + it->second.size())
    throw InvalidArgument("state spec: " + key + " must be a number");
  return v;
}

StateSpec parse_state_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("state spec '" + text + "' lacks a kind prefix");
  StateSpec spec;
  spec.kind = text.substr(0, colon);
  if (spec.kind != "fock" && spec.kind != "yrast" && spec.kind != "dicke" && spec.kind != "multi")
    throw InvalidArgument("unknown state kind '" + spec.kind + "'");
  std::string rest = text.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = std::min(rest.find(',', pos), rest.size());
    const std::string token = rest.substr(pos, comma - pos);
    pos = comma + 1;
    if (token.empty()) {
      if (comma == rest.size()) break;
      throw InvalidArgument("empty field in state spec '" + text + "'");
    }
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidArgument("malformed field '" + token + "'");
    const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
    if (spec.kind == "fock") {
      int mode, n;
      if (key[0] != 'n' || !parse_int(key.substr(1), mode) || !parse_int(value, n) || n < 0)
        throw InvalidArgument("malformed occupation '" + token + "' (expected n<k>=<count>)");
      if (!spec.occupations.emplace(mode, n).second) throw InvalidArgument("mode listed twice: " + token);
    } else {
      if (!spec.fields.emplace(key, value).second) throw InvalidArgument("field listed twice: " + token);
    }
  }
  if (spec.kind == "fock" && spec.occupations.empty()) throw InvalidArgument("fock spec lists no modes");
  return spec;
}

ResolvedState resolve_state(const StateSpec& spec, double L, const YrastOptions& opts) {
  if (spec.kind == "fock") {
    int k_max = 1;
    for (auto [k, n] : spec.occupations) k_max = std::max(k_max, std::abs(k));
    std::vector<int> occ(static_cast<std::size_t>(2 * k_max + 1), 0);
    for (auto [k, n] : spec.occupations) occ[static_cast<std::size_t>(k + k_max)] = n;
    return {WaveFunction(FockState(k_max, std::move(occ)), L), std::nullopt};
  }
  if (spec.kind == "dicke") {
    const int N = spec.integer("N"), K = spec.integer("K");
    return {WaveFunction(free_yrast_state(N, K), L), std::nullopt};
  }
  if (spec.kind == "multi") {
    return {WaveFunction(multi_soliton_state(spec.integer("N"), spec.integer("M")), L), std::nullopt};
  }
  ModelParams p{spec.integer("N"), spec.integer("K"), spec.has("kmax") ? spec.integer("kmax") : 3,
                spec.real("g", 0.0), spec.real("L", L)};
  auto r = find_yrast(p, opts);
  WaveFunction psi(r.state, p.L);
  return {std::move(psi), std::move(r)};
}

}  // namespace yrast
