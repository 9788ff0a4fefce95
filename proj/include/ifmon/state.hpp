/*
 * Copyright (c) 2026, The ifmon authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ifmon/ast.hpp"

namespace ifmon {

class UnboundVariable : public std::out_of_range {
public:
  explicit UnboundVariable(const std::string &name)
      : std::out_of_range("unbound variable '" + name + "'") {}
};

/// Total map from a fixed, sorted variable domain to integers.
class State {
public:
  using Binding = std::pair<std::string, Value>;

  State() = default;

  /// Builds a state over `domain`, taking values from `given` and
  /// defaulting the rest to 0.
  static State over(const VarSet &domain,
                    const std::vector<Binding> &given = {}) {
    State s;
    s.bindings_.reserve(domain.size());
    for (const auto &x : domain)
      s.bindings_.emplace_back(x, 0);
    for (const auto &[k, v] : given) {
      auto *slot = s.find(k);
      if (!slot)
        throw UnboundVariable(k);
      *slot = v;
    }
    return s;
  }

  Value get(const std::string &x) const {
    auto it = lower(x);
    if (it == bindings_.end() || it->first != x)
      throw UnboundVariable(x);
    return it->second;
  }

  bool has(const std::string &x) const {
    auto it = lower(x);
    return it != bindings_.end() && it->first == x;
  }

  State with(const std::string &x, Value v) const {
    State s = *this;
    auto *slot = s.find(x);
    if (!slot)
      throw UnboundVariable(x);
    *slot = v;
    return s;
  }

  VarSet domain() const {
    VarSet out;
    for (const auto &b : bindings_)
      out.insert(b.first);
    return out;
  }

  const std::vector<Binding> &bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }

  /// True iff both states bind every variable in `vars` to the same value.
  bool agrees_on(const State &other, const VarSet &vars) const {
    for (const auto &x : vars)
      if (get(x) != other.get(x))
        return false;
    return true;
  }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < bindings_.size(); ++i) {
      if (i)
        out += ", ";
      out += bindings_[i].first + "=" + std::to_string(bindings_[i].second);
    }
    return out + "}";
  }

  friend auto operator<=>(const State &, const State &) = default;
  friend bool operator==(const State &, const State &) = default;

private:
  std::vector<Binding>::const_iterator lower(const std::string &x) const {
    return std::lower_bound(
        bindings_.begin(), bindings_.end(), x,
        [](const Binding &b, const std::string &k) { return b.first < k; });
  }

  Value *find(const std::string &x) {
    auto it = std::lower_bound(
        bindings_.begin(), bindings_.end(), x,
        [](const Binding &b, const std::string &k) { return b.first < k; });
    if (it == bindings_.end() || it->first != x)
      return nullptr;
    return &it->second;
  }

  std::vector<Binding> bindings_;
};

/// A set of states, or the fault element above every set.
class StateSet {
public:
  StateSet() = default;
  StateSet(std::set<State> states) : states_(std::move(states)) {}
  StateSet(std::initializer_list<State> states) : states_(states) {}

  static StateSet fault() {
    StateSet s;
    s.fault_ = true;
    return s;
  }

  bool is_fault() const { return fault_; }
  const std::set<State> &states() const {
    if (fault_)
      throw std::logic_error("fault state set has no members");
    return states_;
  }
  bool empty() const { return !fault_ && states_.empty(); }
  std::size_t size() const { return fault_ ? 0 : states_.size(); }

  /// Fault-absorbing union.
  friend StateSet join(const StateSet &a, const StateSet &b) {
    if (a.fault_ || b.fault_)
      return fault();
    std::set<State> out = a.states_;
    out.insert(b.states_.begin(), b.states_.end());
    return StateSet(std::move(out));
  }

  friend bool leq(const StateSet &a, const StateSet &b) {
    if (b.fault_)
      return true;
    if (a.fault_)
      return false;
    return std::includes(b.states_.begin(), b.states_.end(),
                         a.states_.begin(), a.states_.end());
  }

  friend bool operator==(const StateSet &a, const StateSet &b) {
    return a.fault_ == b.fault_ && (a.fault_ || a.states_ == b.states_);
  }

  std::string to_string() const {
    if (fault_)
      return "fault";
    std::string out = "[";
    bool first = true;
    for (const auto &s : states_) {
      if (!first)
        out += ", ";
      first = false;
      out += s.to_string();
    }
    return out + "]";
  }

private:
  bool fault_ = false;
  std::set<State> states_;
};

/// Every state over `vars` with values drawn from [lo, hi].
inline std::vector<State> enumerate_states(const VarSet &vars, Value lo,
                                           Value hi) {
  std::vector<std::string> names(vars.begin(), vars.end());
  std::vector<State> out;
  if (hi < lo)
    return out;
  std::vector<Value> cur(names.size(), lo);
  for (;;) {
    std::vector<State::Binding> b;
    for (std::size_t i = 0; i < names.size(); ++i)
      b.emplace_back(names[i], cur[i]);
    out.push_back(State::over(vars, b));
    std::size_t i = names.size();
    while (i > 0) {
      --i;
      if (cur[i] < hi) {
        ++cur[i];
        break;
      }
      cur[i] = lo;
      if (i == 0)
        return out;
    }
    if (names.empty())
      return out;
  }
}

inline StateSet universe(const VarSet &vars, Value lo, Value hi) {
  auto all = enumerate_states(vars, lo, hi);
  return StateSet(std::set<State>(all.begin(), all.end()));
}

class StateSyntaxError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
    ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
    --e;
  return std::string(s.substr(b, e - b));
}

inline State::Binding parse_binding(std::string_view item) {
  auto eq = item.find('=');
  if (eq == std::string_view::npos)
    throw StateSyntaxError("expected name=value, got '" + std::string(item) +
                           "'");
  std::string name = trim(item.substr(0, eq));
  std::string value = trim(item.substr(eq + 1));
  if (name.empty() || (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_'))
    throw StateSyntaxError("invalid variable name '" + name + "'");
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      throw StateSyntaxError("invalid variable name '" + name + "'");
  errno = 0;
  char *end = nullptr;
  long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || *end != '\0' || errno == ERANGE)
    throw StateSyntaxError("invalid integer '" + value + "' for " + name);
  return {name, static_cast<Value>(v)};
}

} // namespace detail

/// Parses `a=1,b=2` (the command-line form).
inline std::vector<State::Binding> parse_bindings(std::string_view text) {
  std::vector<State::Binding> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto item = detail::trim(text.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start));
    if (!item.empty())
      out.push_back(detail::parse_binding(item));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

/// Parses one `name=value` per line; blank lines and `//` or `#`
/// comments are ignored.
inline std::vector<State::Binding> parse_state_file(std::string_view text) {
  std::vector<State::Binding> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto cut = std::min(line.find("//"), line.find('#'));
    if (cut != std::string::npos)
      line.resize(cut);
    auto item = detail::trim(line);
    if (!item.empty())
      out.push_back(detail::parse_binding(item));
  }
  return out;
}

} // namespace ifmon
