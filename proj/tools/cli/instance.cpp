#include "cli/instance.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "abelroot/errors.hpp"
#include "json.hpp"

namespace abelroot::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Integer integer_from(const json& value, const std::string& where) {
  if (value.is_string()) return parse_integer(value.get<std::string>());
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) return Integer(std::to_string(value.get<std::uint64_t>()));
    return Integer(std::to_string(value.get<std::int64_t>()));
  }
  throw InvalidArgument(where + ": expected an integer or a decimal string");
}

std::vector<Integer> vector_from(const json& value, const std::string& where) {
  if (!value.is_array()) throw InvalidArgument(where + ": expected an array");
  std::vector<Integer> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(integer_from(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void check_length(std::vector<Integer>& v, std::size_t n, const std::string& where) {
  if (v.empty()) {
    v.assign(n, 0);
    return;
  }
  if (v.size() != n) {
    throw InvalidArgument(where + " has " + std::to_string(v.size()) + " entries but there are " +
                          std::to_string(n) + " factors");
  }
}

ordered_json strings(const std::vector<Integer>& v) {
  ordered_json out = ordered_json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Prime-power factors of n by trial division up to 10^6; a leftover cofactor
// is accepted only if it is itself prime.
std::vector<PrimePower> factor_modulus(const Integer& n) {
  if (n < 2) throw InvalidArgument("modulus must be >= 2, got " + n.get_str());
  std::vector<PrimePower> out;
  Integer rest = n;
  for (unsigned long d = 2; d <= 1'000'000 && Integer(d) * d <= rest; d += (d == 2 ? 1 : 2)) {
    unsigned long e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
      ++e;
    }
    if (e) out.emplace_back(Integer(d), e);
  }
  if (rest > 1) {
    if (!is_prime(rest)) {
      throw InvalidArgument("modulus " + n.get_str() +
                            " has a composite cofactor beyond trial division; give it pre-factored");
    }
    out.emplace_back(rest, 1);
  }
  return out;
}

}  // namespace

InstanceFile parse_instance(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("instance is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("instance must be a JSON object");
  for (const char* key : {"factors", "element", "multipliers"}) {
    if (!doc.contains(key)) throw InvalidArgument(std::string("instance is missing \"") + key + "\"");
  }

  InstanceFile out;
  const json& factors = doc["factors"];
  if (!factors.is_array() || factors.empty()) {
    throw InvalidArgument("\"factors\" must be a non-empty array");
  }
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const json& f = factors[i];
    const std::string where = "factors[" + std::to_string(i) + "]";
    if (!f.is_object() || !f.contains("p") || !f.contains("e")) {
      throw InvalidArgument(where + " must be an object with \"p\" and \"e\"");
    }
    const Integer p = integer_from(f["p"], where + ".p");
    const Integer e = integer_from(f["e"], where + ".e");
    if (e < 1 || !e.fits_ulong_p()) throw InvalidArgument(where + ".e must be a positive integer");
    out.factors.emplace_back(p, e.get_ui());
  }

  const std::size_t n = out.factors.size();
  out.element = vector_from(doc["element"], "element");
  out.multipliers = vector_from(doc["multipliers"], "multipliers");
  check_length(out.element, n, "element");
  check_length(out.multipliers, n, "multipliers");

  if (doc.contains("claimed_basis") && !doc["claimed_basis"].is_null()) {
    const json& rows = doc["claimed_basis"];
    if (!rows.is_array() || rows.size() != n) {
      throw InvalidArgument("claimed_basis must list exactly " + std::to_string(n) + " rows");
    }
    std::vector<std::vector<Integer>> basis;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string where = "claimed_basis[" + std::to_string(i) + "]";
      auto row = vector_from(rows[i], where);
      if (row.size() != n) throw InvalidArgument(where + " must have " + std::to_string(n) + " entries");
      basis.push_back(std::move(row));
    }
    out.claimed_basis = std::move(basis);
  }
  return out;
}

InstanceFile read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read instance file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string emit_instance(const InstanceFile& instance) {
  ordered_json doc;
  doc["factors"] = ordered_json::array();
  for (const auto& f : instance.factors) {
    ordered_json entry;
    entry["p"] = f.p().get_str();
    entry["e"] = f.e();
    doc["factors"].push_back(entry);
  }
  doc["element"] = strings(instance.element);
  doc["multipliers"] = strings(instance.multipliers);
  if (instance.claimed_basis) {
    doc["claimed_basis"] = ordered_json::array();
    for (const auto& row : *instance.claimed_basis) doc["claimed_basis"].push_back(strings(row));
  }
  return doc.dump(2) + "\n";
}

std::vector<PrimePower> parse_factor_spec(std::string_view spec) {
  // Tokens separated by ',' or by 'x' between "Z/n" terms.
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const char c = spec[i];
    const bool separator =
        c == ',' || ((c == 'x' || c == 'X' || c == '*') && i + 1 < spec.size() &&
                     (spec[i + 1] == 'Z' || spec[i + 1] == 'z' || std::isspace(static_cast<unsigned char>(spec[i + 1]))));
    if (separator) {
      tokens.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  tokens.push_back(trim(current));

  std::vector<PrimePower> out;
  for (const auto& token : tokens) {
    if (token.empty()) throw InvalidArgument("empty factor in spec \"" + std::string(spec) + "\"");
    if (token.size() > 2 && (token[0] == 'Z' || token[0] == 'z') && token[1] == '/') {
      for (auto& f : factor_modulus(parse_integer(trim(token.substr(2))))) out.push_back(f);
      continue;
    }
    const auto caret = token.find('^');
    if (caret == std::string::npos) {
      for (auto& f : factor_modulus(parse_integer(token))) out.push_back(f);
      continue;
    }
    const Integer p = parse_integer(trim(token.substr(0, caret)));
    const Integer e = parse_integer(trim(token.substr(caret + 1)));
    if (e < 1 || !e.fits_ulong_p()) throw InvalidArgument("bad exponent in \"" + token + "\"");
    out.emplace_back(p, e.get_ui());
  }
  return out;
}

bool NormalizedInstance::reordered() const {
  for (std::size_t u = 0; u < position.size(); ++u) {
    if (position[u] != u) return true;
  }
  return false;
}

std::vector<std::vector<Integer>> NormalizedInstance::to_user_order(const BasisCandidate& basis) const {
  std::vector<std::vector<Integer>> rows(position.size(), std::vector<Integer>(position.size()));
  for (std::size_t u = 0; u < position.size(); ++u) {
    for (std::size_t v = 0; v < position.size(); ++v) rows[u][v] = basis[position[u]][position[v]];
  }
  return rows;
}

namespace {

std::vector<Integer> to_canonical(const std::vector<Integer>& user, const std::vector<std::size_t>& position,
                                  const GroupStructure& g, const std::string& what,
                                  std::vector<std::string>& warnings) {
  std::vector<Integer> out(user.size());
  for (std::size_t u = 0; u < user.size(); ++u) {
    const std::size_t c = position[u];
    out[c] = mod(user[u], g.modulus(c));
    if (out[c] != user[u]) {
      warnings.push_back(what + "[" + std::to_string(u) + "] = " + user[u].get_str() +
                         " reduced modulo " + g.modulus(c).get_str() + " to " + out[c].get_str());
    }
  }
  return out;
}

}  // namespace

NormalizedInstance normalize(const InstanceFile& instance) {
  auto [structure, position] = GroupStructure::canonicalize(instance.factors);
  auto group = std::make_shared<const GroupStructure>(std::move(structure));
  std::vector<std::string> warnings;
  Element k(group, to_canonical(instance.element, position, *group, "element", warnings));
  Multipliers m(group, to_canonical(instance.multipliers, position, *group, "multipliers", warnings));

  std::optional<BasisCandidate> claimed;
  if (instance.claimed_basis) {
    std::vector<Element> elements(group->rank(), Element::identity(group));
    for (std::size_t u = 0; u < instance.claimed_basis->size(); ++u) {
      elements[position[u]] = Element(
          group, to_canonical((*instance.claimed_basis)[u], position, *group,
                              "claimed_basis[" + std::to_string(u) + "]", warnings));
    }
    claimed.emplace(group, std::move(elements));
  }
  return NormalizedInstance{group, std::move(position), ExtractionProblem(std::move(k), std::move(m)),
                            std::move(claimed), std::move(warnings)};
}

}  // namespace abelroot::cli
