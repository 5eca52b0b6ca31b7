#include "smoothrank/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace smoothrank {

namespace {

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Non-empty lines with '#' comments stripped, paired with 1-based numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++number_;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      line = trim(raw);
      if (!line.empty()) return true;
    }
    return false;
  }
  int number() const { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

int to_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + s + "'");
  }
}

double to_real(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + s + "'");
  }
}

/// Splits "key=value"; returns false when there is no '='.
bool key_value(const std::string& line, std::string& key, std::string& value) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) return false;
  key = trim(line.substr(0, eq));
  value = trim(line.substr(eq + 1));
  return true;
}

std::string format_real(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

Ranking ranking_at(const std::string& text, int m, int line) {
  try {
    return parse_ranking(text, m);
  } catch (const std::exception& e) {
    throw ParseError(line, e.what());
  }
}

struct Edge {
  Alternative from;
  Alternative to;
  std::optional<double> weight;
};

/// "i -> j" or "i -> j [w=x]".
Edge parse_edge(const std::string& line, int number) {
  const auto arrow = line.find("->");
  if (arrow == std::string::npos) throw ParseError(number, "expected 'i -> j'");
  Edge e;
  e.from = to_int(trim(line.substr(0, arrow)), number) - 1;
  std::string rest = line.substr(arrow + 2);
  if (auto bracket = rest.find('['); bracket != std::string::npos) {
    const auto close = rest.find(']', bracket);
    if (close == std::string::npos) throw ParseError(number, "unterminated '['");
    std::string key, value;
    if (!key_value(rest.substr(bracket + 1, close - bracket - 1), key, value) || key != "w")
      throw ParseError(number, "expected [w=<float>]");
    e.weight = to_real(value, number);
    rest = rest.substr(0, bracket);
  }
  e.to = to_int(trim(rest), number) - 1;
  return e;
}

int require_m(const std::optional<int>& m, int line) {
  if (!m) throw ParseError(line, "missing m=<int> header");
  if (*m < 1) throw ParseError(line, "m must be positive");
  return *m;
}

}  // namespace

Ranking parse_ranking(const std::string& text, int m) {
  std::vector<Alternative> order;
  for (const auto& item : split(text, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw std::invalid_argument("bad alternative '" + item + "'");
    order.push_back(v - 1);
  }
  if (static_cast<int>(order.size()) != m)
    throw std::invalid_argument("ranking '" + text + "' does not list " + std::to_string(m) + " alternatives");
  return Ranking(std::move(order));
}

std::string format_ranking(const Ranking& r) {
  std::string out;
  for (int i = 0; i < r.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(r[i] + 1);
  }
  return out;
}

Profile<double> read_profile(std::istream& in) {
  LineReader reader(in);
  std::string line, key, value;
  std::optional<int> m, n;
  std::optional<Profile<double>> profile;
  while (reader.next(line)) {
    if (!profile && key_value(line, key, value)) {
      if (key == "m") m = to_int(value, reader.number());
      else if (key == "n") n = to_int(value, reader.number());
      else throw ParseError(reader.number(), "unknown header '" + key + "'");
      continue;
    }
    if (!profile) profile.emplace(require_m(m, reader.number()));
    double count = 1.0;
    std::string votes = line;
    if (auto colon = line.find(':'); colon != std::string::npos) {
      count = to_real(trim(line.substr(0, colon)), reader.number());
      votes = trim(line.substr(colon + 1));
    }
    profile->add(ranking_at(votes, *m, reader.number()), count);
  }
  if (!profile) profile.emplace(require_m(m, reader.number()));
  if (n && std::abs(profile->total_weight() - *n) > 1e-9)
    throw ParseError(reader.number(), "n=" + std::to_string(*n) + " does not match the vote count");
  return *profile;
}

void write_profile(std::ostream& out, const Profile<double>& p) {
  out << "m=" << p.num_alternatives() << "\n";
  out << "n=" << format_real(p.total_weight()) << "\n";
  for (const auto& v : p.votes()) out << format_real(v.weight) << ": " << format_ranking(v.ranking) << "\n";
}

Profile<double> read_soc(std::istream& in) {
  std::vector<std::string> lines;
  std::string raw;
  while (std::getline(in, raw)) lines.push_back(trim(raw));
  std::optional<int> m;
  std::size_t i = 0;
  const bool header_layout = std::any_of(lines.begin(), lines.end(), [](const std::string& l) {
    return l.rfind("# NUMBER ALTERNATIVES:", 0) == 0;
  });
  if (header_layout) {
    for (; i < lines.size() && (lines[i].empty() || lines[i][0] == '#'); ++i)
      if (lines[i].rfind("# NUMBER ALTERNATIVES:", 0) == 0)
        m = to_int(trim(lines[i].substr(lines[i].find(':') + 1)), static_cast<int>(i) + 1);
  } else {
    while (i < lines.size() && lines[i].empty()) ++i;
    if (i == lines.size()) throw ParseError(1, "empty election file");
    m = to_int(lines[i], static_cast<int>(i) + 1);
    i += 1 + static_cast<std::size_t>(*m) + 1;  // names, then "n,sum,unique"
  }
  Profile<double> p(require_m(m, static_cast<int>(i)));
  for (; i < lines.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (lines[i].empty() || lines[i][0] == '#') continue;
    std::string count, order;
    if (auto colon = lines[i].find(':'); colon != std::string::npos) {
      count = trim(lines[i].substr(0, colon));
      order = trim(lines[i].substr(colon + 1));
    } else {
      const auto comma = lines[i].find(',');
      if (comma == std::string::npos) throw ParseError(number, "expected 'count,i1,...'");
      count = trim(lines[i].substr(0, comma));
      order = trim(lines[i].substr(comma + 1));
    }
    p.add(ranking_at(order, *m, number), to_real(count, number));
  }
  return p;
}

AnyParameterProfile read_parameter_profile(std::istream& in) {
  LineReader reader(in);
  std::string line, key, value, model;
  std::optional<int> m;
  std::optional<AnyParameterProfile> out;
  while (reader.next(line)) {
    const auto bar = line.find('|');
    if (bar == std::string::npos) {
      if (!key_value(line, key, value)) throw ParseError(reader.number(), "expected key=value");
      if (key == "model") {
        if (value != "mallows" && value != "pl") throw ParseError(reader.number(), "model must be mallows or pl");
        model = value;
      } else if (key == "m") {
        m = to_int(value, reader.number());
      } else {
        throw ParseError(reader.number(), "unknown header '" + key + "'");
      }
      continue;
    }
    const int mm = require_m(m, reader.number());
    if (!out) {
      if (model == "mallows") out = ParameterProfile<MallowsParam<double>>(mm);
      else if (model == "pl") out = ParameterProfile<PlackettLuceParam<double>>(mm);
      else throw ParseError(reader.number(), "model must be mallows or pl");
    }
    const double weight = to_real(trim(line.substr(0, bar)), reader.number());
    std::optional<double> phi;
    std::optional<Ranking> central;
    std::vector<double> theta;
    for (const auto& field : split(line.substr(bar + 1), ';')) {
      if (!key_value(field, key, value)) throw ParseError(reader.number(), "expected key=value in '" + field + "'");
      if (key == "phi") phi = to_real(value, reader.number());
      else if (key == "central") central = ranking_at(value, mm, reader.number());
      else if (key == "theta")
        for (const auto& t : split(value, ',')) theta.push_back(to_real(t, reader.number()));
      else throw ParseError(reader.number(), "unknown field '" + key + "'");
    }
    try {
      if (auto* p = std::get_if<ParameterProfile<MallowsParam<double>>>(&*out)) {
        if (!phi || !central) throw ParseError(reader.number(), "Mallows entries need phi and central");
        p->add(MallowsParam<double>(*central, *phi), weight);
      } else {
        auto& pl = std::get<ParameterProfile<PlackettLuceParam<double>>>(*out);
        pl.add(PlackettLuceParam<double>(theta), weight);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(reader.number(), e.what());
    }
  }
  if (!out) {
    const int mm = require_m(m, reader.number());
    if (model == "pl") return ParameterProfile<PlackettLuceParam<double>>(mm);
    if (model == "mallows") return ParameterProfile<MallowsParam<double>>(mm);
    throw ParseError(reader.number(), "model must be mallows or pl");
  }
  return *out;
}

void write_parameter_profile(std::ostream& out, const ParameterProfile<MallowsParam<double>>& p) {
  out << "model=mallows\nm=" << p.num_alternatives() << "\n";
  for (const auto& e : p.entries())
    out << format_real(e.weight) << " | phi=" << format_real(e.param.phi)
        << "; central=" << format_ranking(e.param.central) << "\n";
}

void write_parameter_profile(std::ostream& out, const ParameterProfile<PlackettLuceParam<double>>& p) {
  out << "model=pl\nm=" << p.num_alternatives() << "\n";
  for (const auto& e : p.entries()) {
    out << format_real(e.weight) << " | theta=";
    for (std::size_t i = 0; i < e.param.theta.size(); ++i) out << (i ? "," : "") << format_real(e.param.theta[i]);
    out << "\n";
  }
}

namespace {

template <typename OnEdge>
int read_edge_list(std::istream& in, OnEdge on_edge, std::optional<int> m = std::nullopt) {
  LineReader reader(in);
  std::string line, key, value;
  while (reader.next(line)) {
    if (line.find("->") == std::string::npos && key_value(line, key, value)) {
      if (key != "m") throw ParseError(reader.number(), "unknown header '" + key + "'");
      m = to_int(value, reader.number());
      continue;
    }
    const int mm = require_m(m, reader.number());
    const Edge e = parse_edge(line, reader.number());
    if (e.from < 0 || e.to < 0 || e.from >= mm || e.to >= mm || e.from == e.to)
      throw ParseError(reader.number(), "bad edge");
    on_edge(mm, e, reader.number());
  }
  return require_m(m, reader.number());
}

}  // namespace

Wmg read_wmg(std::istream& in) {
  std::optional<Wmg> g;
  const int m = read_edge_list(in, [&](int mm, const Edge& e, int) {
    if (!g) g.emplace(mm);
    g->add(e.from, e.to, e.weight.value_or(1.0));
  });
  return g ? *g : Wmg(m);
}

void write_wmg(std::ostream& out, const Wmg& g) {
  const int m = g.num_alternatives();
  out << "m=" << m << "\n";
  for (Alternative a = 0; a < m; ++a)
    for (Alternative b = a + 1; b < m; ++b) {
      const double w = g(a, b);
      if (w > 0) out << a + 1 << " -> " << b + 1 << " [w=" << format_real(w) << "]\n";
      else if (w < 0) out << b + 1 << " -> " << a + 1 << " [w=" << format_real(-w) << "]\n";
    }
}

Digraph read_digraph(std::istream& in) {
  std::optional<Digraph> g;
  const int m = read_edge_list(in, [&](int mm, const Edge& e, int line) {
    if (!g) g.emplace(mm);
    if (e.weight) throw ParseError(line, "digraph edges carry no weight");
    g->add_edge(e.from, e.to);
  });
  return g ? *g : Digraph(m);
}

void write_digraph(std::ostream& out, const Digraph& g) {
  out << "m=" << g.num_vertices() << "\n";
  for (auto [a, b] : g.edges()) out << a + 1 << " -> " << b + 1 << "\n";
}

FasInstance read_fas(std::istream& in) {
  LineReader reader(in);
  std::string line, key, value;
  std::optional<int> m, t;
  std::optional<FasKind> kind;
  std::vector<Edge> edges;
  int largest = 0;
  while (reader.next(line)) {
    if (line.find("->") == std::string::npos) {
      if (!key_value(line, key, value)) throw ParseError(reader.number(), "expected key=value");
      if (key == "kind") {
        if (value == "eulerian") kind = FasKind::Eulerian;
        else if (value == "tournament") kind = FasKind::Tournament;
        else throw ParseError(reader.number(), "kind must be eulerian or tournament");
      } else if (key == "t") {
        t = to_int(value, reader.number());
      } else if (key == "m") {
        m = to_int(value, reader.number());
      } else {
        throw ParseError(reader.number(), "unknown header '" + key + "'");
      }
      continue;
    }
    Edge e = parse_edge(line, reader.number());
    if (e.weight) throw ParseError(reader.number(), "FAS edges carry no weight");
    if (e.from < 0 || e.to < 0 || e.from == e.to) throw ParseError(reader.number(), "bad edge");
    largest = std::max({largest, e.from + 1, e.to + 1});
    edges.push_back(e);
  }
  if (!kind) throw ParseError(reader.number(), "missing kind=");
  if (!t) throw ParseError(reader.number(), "missing t=");
  const int mm = m.value_or(largest);
  if (largest > mm) throw ParseError(reader.number(), "edge endpoint exceeds m");
  FasInstance inst;
  inst.graph = Digraph(mm);
  for (const auto& e : edges) inst.graph.add_edge(e.from, e.to);
  inst.t = *t;
  inst.kind = *kind;
  inst.validate();
  return inst;
}

void write_fas(std::ostream& out, const FasInstance& inst) {
  out << "kind=" << (inst.kind == FasKind::Eulerian ? "eulerian" : "tournament") << "\n";
  out << "t=" << inst.t << "\n";
  out << "m=" << inst.graph.num_vertices() << "\n";
  for (auto [a, b] : inst.graph.edges()) out << a + 1 << " -> " << b + 1 << "\n";
}

nlohmann::json to_json(const SolveResult& r) {
  nlohmann::json j;
  std::vector<int> ranking;
  for (Alternative a : r.ranking.order()) ranking.push_back(a + 1);
  j["ranking"] = ranking;
  j["score"] = r.score;
  j["elapsed_ms"] = r.elapsed.count();
  j["op_count"] = r.op_count;
  j["d"] = r.diagnostics ? nlohmann::json(r.diagnostics->d) : nlohmann::json(nullptr);
  j["window_radius"] = r.diagnostics ? nlohmann::json(r.diagnostics->window_radius) : nlohmann::json(nullptr);
  j["solver"] = r.solver;
  return j;
}

nlohmann::json to_json(const TrialRecord& r) {
  nlohmann::json j;
  j["seed"] = r.seed;
  j["K"] = r.K;
  j["n"] = r.n;
  j["solver"] = r.solver;
  j["finished"] = r.finished;
  j["elapsed_ms"] = r.elapsed_ms;
  j["op_count"] = r.op_count;
  j["answer"] = r.answer == Answer::Yes ? "YES" : "NO";
  j["back_edges"] = r.finished ? nlohmann::json(r.back_edges) : nlohmann::json(nullptr);
  return j;
}

Profile<double> load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_profile(in);
}

FasInstance load_fas(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_fas(in);
}

}  // namespace smoothrank
