#ifndef SMOOTHRANK_IO_HPP
#define SMOOTHRANK_IO_HPP

// Text formats. Alternatives are written 1-based; everything in memory is
// 0-based.

#include "smoothrank/gadgets.hpp"
#include "smoothrank/solvers.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <variant>

namespace smoothrank {

/// Thrown with a 1-based line number for malformed input.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// "1,3,2" -> ranking a1 > a3 > a2.
Ranking parse_ranking(const std::string& text, int m);
std::string format_ranking(const Ranking& r);

// .profile: "m=<int>", "n=<int>", then "<count>: i1,...,im" per line
// (count optional). '#' starts a comment.
Profile<double> read_profile(std::istream& in);
void write_profile(std::ostream& out, const Profile<double>& p);

/// Strict-order-complete election files: either the header-comment layout
/// ("# NUMBER ALTERNATIVES: m", "count: i1,...") or the older layout (m, m
/// name lines, "n,sum,unique", then "count,i1,...").
Profile<double> read_soc(std::istream& in);

// .pprofile: "model=mallows|pl", "m=<int>", then "weight | phi=..; central=.."
// or "weight | theta=t1,...".
using AnyParameterProfile =
    std::variant<ParameterProfile<MallowsParam<double>>, ParameterProfile<PlackettLuceParam<double>>>;

AnyParameterProfile read_parameter_profile(std::istream& in);
void write_parameter_profile(std::ostream& out, const ParameterProfile<MallowsParam<double>>& p);
void write_parameter_profile(std::ostream& out, const ParameterProfile<PlackettLuceParam<double>>& p);

// Edge lists: "m=<int>" then "i -> j [w=<float>]".
Wmg read_wmg(std::istream& in);
void write_wmg(std::ostream& out, const Wmg& g);
Digraph read_digraph(std::istream& in);
void write_digraph(std::ostream& out, const Digraph& g);

// FAS instance: "kind=eulerian|tournament", "t=<int>", optional "m=<int>",
// then "i -> j" edges. Without m, the largest index used sets it.
FasInstance read_fas(std::istream& in);
void write_fas(std::ostream& out, const FasInstance& inst);

nlohmann::json to_json(const SolveResult& r);
nlohmann::json to_json(const TrialRecord& r);

Profile<double> load_profile(const std::string& path);
FasInstance load_fas(const std::string& path);

}  // namespace smoothrank

#endif  // SMOOTHRANK_IO_HPP
