#include "pirogue/intervention.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "pirogue/errors.hpp"
#include "pirogue/outputs.hpp"

namespace pirogue {

std::string_view to_string(Intervention::Kind kind) {
  switch (kind) {
    case Intervention::Kind::set_site_capacity: return "set_site_capacity";
    case Intervention::Kind::scale_catchability: return "scale_catchability";
    case Intervention::Kind::set_campaign_prob: return "set_campaign_prob";
    case Intervention::Kind::add_units: return "add_units";
    case Intervention::Kind::remove_units: return "remove_units";
  }
  return "?";
}

namespace {

std::string quote_site(const std::string& site) {
  if (site.find_first_of(" \t\"") == std::string::npos && !site.empty()) return site;
  return '"' + site + '"';
}

std::string category_text(int category) { return category == 0 ? "all" : std::to_string(category); }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == '\t') {
      ++i;
      continue;
    }
    if (text[i] == '"') {
      const auto end = text.find('"', i + 1);
      if (end == std::string_view::npos) throw ValidationError("unterminated quote in intervention '" + std::string(text) + "'");
      out.emplace_back(text.substr(i + 1, end - i - 1));
      i = end + 1;
      continue;
    }
    const auto end = text.find_first_of(" \t", i);
    out.emplace_back(text.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i));
    i = end == std::string_view::npos ? text.size() : end;
  }
  return out;
}

double parse_double(const std::string& s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError(std::string(what) + ": not a number: '" + s + "'");
  return v;
}

int parse_int(const std::string& s, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ValidationError(std::string(what) + ": not an integer: '" + s + "'");
  return v;
}

int parse_category(const std::string& s, bool allow_all) {
  if (allow_all && s == "all") return 0;
  const int c = parse_int(s, "category");
  if (c < 1 || c > 3) throw ValidationError("category must be 1, 2 or 3" + std::string(allow_all ? " or all" : ""));
  return c;
}

}  // namespace

std::string format_intervention(const Intervention& cmd) {
  std::string out(to_string(cmd.kind));
  switch (cmd.kind) {
    case Intervention::Kind::set_site_capacity:
      return out + ' ' + quote_site(cmd.site) + ' ' + format_number(cmd.value);
    case Intervention::Kind::scale_catchability:
    case Intervention::Kind::set_campaign_prob:
      return out + ' ' + category_text(cmd.category) + ' ' + format_number(cmd.value);
    case Intervention::Kind::add_units:
      return out + ' ' + quote_site(cmd.site) + ' ' + std::to_string(cmd.category) + ' ' + std::to_string(cmd.count);
    case Intervention::Kind::remove_units:
      return out + ' ' + quote_site(cmd.site) + ' ' + std::to_string(cmd.category) + ' ' +
             (cmd.count < 0 ? std::string("all") : std::to_string(cmd.count));
  }
  return out;
}

Intervention parse_intervention(std::string_view text) {
  const auto tok = tokenize(text);
  if (tok.empty()) throw ValidationError("empty intervention");
  Intervention cmd;
  const auto& verb = tok[0];
  const auto arity = [&](std::size_t n) {
    if (tok.size() != n + 1)
      throw ValidationError(verb + " takes " + std::to_string(n) + " arguments, got " + std::to_string(tok.size() - 1));
  };
  if (verb == "set_site_capacity") {
    arity(2);
    cmd.kind = Intervention::Kind::set_site_capacity;
    cmd.site = tok[1];
    cmd.value = parse_double(tok[2], "capacity");
    if (cmd.value < 0.0) throw ValidationError("capacity must be non-negative");
  } else if (verb == "scale_catchability" || verb == "set_campaign_prob") {
    arity(2);
    cmd.kind = verb == "scale_catchability" ? Intervention::Kind::scale_catchability : Intervention::Kind::set_campaign_prob;
    cmd.category = parse_category(tok[1], true);
    cmd.value = parse_double(tok[2], verb == "scale_catchability" ? "factor" : "probability");
    if (cmd.value < 0.0) throw ValidationError(verb + ": value must be non-negative");
    if (cmd.kind == Intervention::Kind::set_campaign_prob && cmd.value > 1.0)
      throw ValidationError("campaign probability must lie in [0, 1]");
  } else if (verb == "add_units" || verb == "remove_units") {
    arity(3);
    cmd.kind = verb == "add_units" ? Intervention::Kind::add_units : Intervention::Kind::remove_units;
    cmd.site = tok[1];
    cmd.category = parse_category(tok[2], false);
    if (cmd.kind == Intervention::Kind::remove_units && tok[3] == "all") {
      cmd.count = -1;
    } else {
      cmd.count = parse_int(tok[3], "count");
      if (cmd.count < 0) throw ValidationError("count must be non-negative");
    }
  } else {
    throw ValidationError("unknown intervention '" + verb + "'");
  }
  return cmd;
}

}  // namespace pirogue
