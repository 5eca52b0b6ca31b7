#include "smoothrank/core.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace smoothrank {

namespace {

void check_bijection(const std::vector<Alternative>& values, const char* what) {
  std::vector<char> seen(values.size(), 0);
  for (Alternative a : values) {
    if (a < 0 || a >= static_cast<Alternative>(values.size()) || seen[a])
      throw std::invalid_argument(std::string(what) + ": not a permutation of 0..m-1");
    seen[a] = 1;
  }
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return std::invalid_argument("cannot parse rational: '" + std::string(text) + "'"); };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw fail();
    return num / den;
  }

  bool negative = false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  boost::multiprecision::cpp_int digits = 0;
  int scale = 0;
  bool any_digit = false;
  bool in_fraction = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (in_fraction) ++scale;
    } else if (c == '.' && !in_fraction) {
      in_fraction = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw fail();
  int exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw fail();
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
    if (i == text.size()) throw fail();
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) throw fail();
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 4000) throw fail();
    }
    if (exp_negative) exponent = -exponent;
  }
  Rational value(digits);
  value *= ipow(Rational(10), exponent - scale);
  return negative ? Rational(-value) : value;
}

// ---------------------------------------------------------------------------

Ranking::Ranking(std::vector<Alternative> order) : order_(std::move(order)) {
  check_bijection(order_, "Ranking");
}

Ranking Ranking::identity(int m) {
  std::vector<Alternative> order(m);
  std::iota(order.begin(), order.end(), 0);
  return Ranking(std::move(order));
}

std::vector<int> Ranking::positions() const {
  std::vector<int> pos(order_.size());
  for (int i = 0; i < size(); ++i) pos[order_[i]] = i;
  return pos;
}

Ranking Ranking::reversed() const {
  return Ranking(std::vector<Alternative>(order_.rbegin(), order_.rend()));
}

std::uint64_t Ranking::code() const {
  if (size() > 16) throw std::length_error("Ranking::code: m > 16");
  std::uint64_t code = 0;
  for (Alternative a : order_) code = (code << 4) | static_cast<std::uint64_t>(a);
  return code;
}

Ranking Ranking::from_code(std::uint64_t code, int m) {
  std::vector<Alternative> order(m);
  for (int i = m - 1; i >= 0; --i) {
    order[i] = static_cast<Alternative>(code & 0xF);
    code >>= 4;
  }
  return Ranking(std::move(order));
}

std::string Ranking::label() const {
  std::string out;
  for (int i = 0; i < size(); ++i) {
    if (i) out += '>';
    out += 'a' + std::to_string(order_[i] + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------

Permutation::Permutation(std::vector<Alternative> map) : map_(std::move(map)) {
  check_bijection(map_, "Permutation");
}

Permutation Permutation::identity(int m) {
  std::vector<Alternative> map(m);
  std::iota(map.begin(), map.end(), 0);
  return Permutation(std::move(map));
}

Permutation Permutation::transposition(int m, Alternative a, Alternative b) {
  auto p = identity(m);
  std::swap(p.map_.at(a), p.map_.at(b));
  return p;
}

Permutation Permutation::cycle(int m, std::span<const Alternative> cycle) {
  auto p = identity(m);
  const auto len = cycle.size();
  for (std::size_t i = 0; i < len; ++i) p.map_.at(cycle[i]) = cycle[(i + 1) % len];
  check_bijection(p.map_, "Permutation::cycle");
  return p;
}

Permutation Permutation::inverse() const {
  std::vector<Alternative> inv(map_.size());
  for (int a = 0; a < size(); ++a) inv[map_[a]] = a;
  return Permutation(std::move(inv));
}

Permutation Permutation::pow(int exponent) const {
  Permutation base = exponent < 0 ? inverse() : *this;
  Permutation result = identity(size());
  for (int k = std::abs(exponent); k > 0; --k) result = base * result;
  return result;
}

Permutation operator*(const Permutation& lhs, const Permutation& rhs) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("Permutation: mismatched m");
  std::vector<Alternative> map(rhs.size());
  for (int a = 0; a < rhs.size(); ++a) map[a] = lhs(rhs(a));
  return Permutation(std::move(map));
}

// ---------------------------------------------------------------------------

void Digraph::add_edge(Alternative a, Alternative b) {
  if (a == b) throw std::invalid_argument("Digraph: self-loop");
  if (a < 0 || b < 0 || a >= m_ || b >= m_) throw std::out_of_range("Digraph: vertex out of range");
  char& slot = adj_[index(a, b)];
  if (!slot) {
    slot = 1;
    ++edge_count_;
  }
}

void Digraph::remove_edge(Alternative a, Alternative b) {
  char& slot = adj_.at(index(a, b));
  if (slot) {
    slot = 0;
    --edge_count_;
  }
}

std::vector<std::pair<Alternative, Alternative>> Digraph::edges() const {
  std::vector<std::pair<Alternative, Alternative>> out;
  out.reserve(edge_count_);
  for (Alternative a = 0; a < m_; ++a)
    for (Alternative b = 0; b < m_; ++b)
      if (adj_[index(a, b)]) out.emplace_back(a, b);
  return out;
}

int Digraph::out_degree(Alternative a) const {
  int d = 0;
  for (Alternative b = 0; b < m_; ++b) d += adj_[index(a, b)];
  return d;
}

int Digraph::in_degree(Alternative a) const {
  int d = 0;
  for (Alternative b = 0; b < m_; ++b) d += adj_[index(b, a)];
  return d;
}

bool Digraph::is_balanced() const {
  for (Alternative a = 0; a < m_; ++a)
    if (in_degree(a) != out_degree(a)) return false;
  return true;
}

bool Digraph::is_tournament() const {
  for (Alternative a = 0; a < m_; ++a)
    for (Alternative b = a + 1; b < m_; ++b)
      if (has_edge(a, b) == has_edge(b, a)) return false;
  return true;
}

bool Digraph::has_antiparallel_pair() const {
  for (Alternative a = 0; a < m_; ++a)
    for (Alternative b = a + 1; b < m_; ++b)
      if (has_edge(a, b) && has_edge(b, a)) return true;
  return false;
}

// ---------------------------------------------------------------------------

int kt_distance(const Ranking& r, const Ranking& w) {
  if (r.size() != w.size()) throw std::invalid_argument("kt_distance: mismatched m");
  const auto pos = w.positions();
  const auto order = r.order();
  int disagreements = 0;
  for (int i = 0; i < r.size(); ++i)
    for (int j = i + 1; j < r.size(); ++j)
      if (pos[order[i]] > pos[order[j]]) ++disagreements;
  return disagreements;
}

int kt_to_digraph(const Ranking& r, const Digraph& g) {
  if (r.size() != g.num_vertices()) throw std::invalid_argument("kt_to_digraph: mismatched m");
  const auto pos = r.positions();
  int back = 0;
  for (auto [a, b] : g.edges())
    if (pos[b] < pos[a]) ++back;
  return back;
}

Ranking permute(const Permutation& sigma, const Ranking& r) {
  if (sigma.size() != r.size()) throw std::invalid_argument("permute: mismatched m");
  std::vector<Alternative> order(r.size());
  for (int i = 0; i < r.size(); ++i) order[i] = sigma(r[i]);
  return Ranking(std::move(order));
}

Digraph permute(const Permutation& sigma, const Digraph& g) {
  if (sigma.size() != g.num_vertices()) throw std::invalid_argument("permute: mismatched m");
  Digraph out(g.num_vertices());
  for (auto [a, b] : g.edges()) out.add_edge(sigma(a), sigma(b));
  return out;
}

std::vector<Ranking> all_rankings(int m) {
  std::vector<Alternative> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Ranking> out;
  do {
    out.emplace_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

}  // namespace smoothrank
