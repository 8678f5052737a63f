#include "picomm/classical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <sstream>
#include <thread>
#include <vector>

namespace picomm {

namespace {

struct Row {
  std::size_t prep;
  std::size_t meas;
  std::size_t answer;  // outcome position of s within measurement
};

std::vector<Row> index_rows(const TaskLayout& layout) {
  std::vector<Row> rows;
  for (const ScenarioRow& r : layout.rows()) {
    const std::size_t j = layout.measurement_index(r.b);
    rows.push_back({layout.preparation_index(r.a), j, layout.outcome_index(j, r.s)});
  }
  return rows;
}

struct Search {
  const TaskLayout& layout;
  std::vector<Row> rows;
  int bits;
  std::size_t messages;
  std::size_t preps;
  std::size_t max_outcomes = 0;

  Search(const TaskLayout& l, int c) : layout(l), rows(index_rows(l)), bits(c), messages(std::size_t{1} << c), preps(l.preparations().size()) {
    for (std::size_t j = 0; j < l.measurements().size(); ++j) max_outcomes = std::max(max_outcomes, l.outcome_count(j));
  }

  std::size_t message_of(std::uint64_t code, std::size_t prep) const {
    const auto shift = static_cast<unsigned>(bits) * static_cast<unsigned>(preps - 1 - prep);
    return static_cast<std::size_t>((code >> shift) & (messages - 1));
  }

  /// Correct count of the best decoding for a fixed encoding, reusing `votes`.
  int score(std::uint64_t code, std::vector<int>& votes) const {
    std::fill(votes.begin(), votes.end(), 0);
    for (const Row& r : rows) votes[(r.meas * messages + message_of(code, r.prep)) * max_outcomes + r.answer] += 1;
    int total = 0;
    for (std::size_t cell = 0; cell < votes.size(); cell += max_outcomes) {
      total += *std::max_element(votes.begin() + static_cast<std::ptrdiff_t>(cell),
                                 votes.begin() + static_cast<std::ptrdiff_t>(cell + max_outcomes));
    }
    return total;
  }

  ClassicalStrategy build(std::uint64_t code) const {
    ClassicalStrategy s;
    s.message_bits = bits;
    std::vector<int> votes(layout.measurements().size() * messages * max_outcomes, 0);
    for (const Row& r : rows) votes[(r.meas * messages + message_of(code, r.prep)) * max_outcomes + r.answer] += 1;
    for (std::size_t p = 0; p < preps; ++p) s.encoding[layout.preparations()[p]] = static_cast<int>(message_of(code, p));
    for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
      for (std::size_t msg = 0; msg < messages; ++msg) {
        const auto first = votes.begin() + static_cast<std::ptrdiff_t>((j * messages + msg) * max_outcomes);
        const auto count = static_cast<std::ptrdiff_t>(layout.outcome_count(j));
        const auto best = std::max_element(first, first + count);  // first maximum = smallest outcome
        s.decoding[{layout.measurements()[j], static_cast<int>(msg)}] = layout.outcomes(j)[static_cast<std::size_t>(best - first)];
      }
    }
    return s;
  }
};

}  // namespace

void ClassicalStrategy::validate(const TaskLayout& layout) const {
  if (message_bits < 1 || message_bits > 30) throw ConstraintViolation("message_bits must lie in 1..30");
  const int messages = 1 << message_bits;
  for (const IndexSet& a : layout.preparations()) {
    auto it = encoding.find(a);
    if (it == encoding.end()) throw ConstraintViolation("strategy has no encoding for " + to_string(a));
    if (it->second < 0 || it->second >= messages) throw ConstraintViolation("message out of range for " + to_string(a));
  }
  for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
    const IndexSet& b = layout.measurements()[j];
    for (int msg = 0; msg < messages; ++msg) {
      auto it = decoding.find({b, msg});
      if (it == decoding.end()) throw ConstraintViolation("strategy has no decoding for " + to_string(b));
      const auto& outs = layout.outcomes(j);
      if (std::find(outs.begin(), outs.end(), it->second) == outs.end()) {
        throw ConstraintViolation("decoded answer " + std::to_string(it->second) + " is not an outcome of " + to_string(b));
      }
    }
  }
}

ClassicalOptimum optimal_classical(const TaskSpec& task, int message_bits, const ClassicalSearchOptions& options) {
  if (message_bits < 1) throw ConstraintViolation("message_bits must be at least 1");
  const TaskLayout layout(task);
  const double total_bits = static_cast<double>(message_bits) * static_cast<double>(layout.preparations().size());
  const double encodings = std::pow(2.0, total_bits);
  if (total_bits > 62.0 || encodings > options.budget) {
    throw BudgetExceeded("classical search needs 2^" + std::to_string(static_cast<long long>(total_bits)) + " encodings", encodings);
  }
  const Search search(layout, message_bits);
  const auto count = static_cast<std::uint64_t>(encodings);
  const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(1, options.threads)), 1, count));

  struct Best {
    int value = -1;
    std::uint64_t code = 0;
  };
  std::vector<Best> best(workers);
  auto work = [&](unsigned w) {
    std::vector<int> votes(layout.measurements().size() * search.messages * search.max_outcomes, 0);
    const std::uint64_t lo = count * w / workers;
    const std::uint64_t hi = count * (w + 1) / workers;
    for (std::uint64_t code = lo; code < hi; ++code) {
      const int v = search.score(code, votes);
      if (v > best[w].value) best[w] = {v, code};
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  Best overall;
  for (const Best& b : best)
    if (b.value > overall.value) overall = b;  // earlier chunks hold smaller codes

  ClassicalOptimum out;
  out.correct_count = overall.value;
  out.row_count = static_cast<int>(layout.rows().size());
  out.strategy = search.build(overall.code);
  return out;
}

int correct_count(const TaskSpec& task, const ClassicalStrategy& strategy) {
  const TaskLayout layout(task);
  strategy.validate(layout);
  int total = 0;
  for (const ScenarioRow& r : layout.rows()) {
    if (strategy.decoding.at({r.b, strategy.encoding.at(r.a)}) == r.s) ++total;
  }
  return total;
}

Behavior strategy_behavior(const TaskSpec& task, const ClassicalStrategy& strategy) {
  const TaskLayout layout(task);
  strategy.validate(layout);
  Behavior out;
  for (const IndexSet& a : layout.preparations()) {
    for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
      const IndexSet& b = layout.measurements()[j];
      const int guess = strategy.decoding.at({b, strategy.encoding.at(a)});
      for (int k : layout.outcomes(j)) out.set({a, b, k}, k == guess ? 1.0 : 0.0);
    }
  }
  return out;
}

double worst_case_success(const TaskSpec& task, const ClassicalStrategy& strategy) {
  const TaskLayout layout(task);
  return correct_count(task, strategy) == static_cast<int>(layout.rows().size()) ? 1.0 : 0.0;
}

std::string render_strategy(const TaskSpec& task, const ClassicalStrategy& strategy) {
  const TaskLayout layout(task);
  strategy.validate(layout);
  const int n = task.n();
  const int messages = 1 << strategy.message_bits;
  auto msg_str = [&](int msg) {
    std::string s;
    for (int bit = strategy.message_bits - 1; bit >= 0; --bit) s.push_back(((msg >> bit) & 1) ? '1' : '0');
    return s;
  };
  const int w = std::max(n, 4) + 2;
  std::ostringstream os;
  os << "Encoding\n" << std::left << std::setw(w) << "a" << "r(a)\n";
  for (const IndexSet& a : layout.preparations()) os << std::setw(w) << to_bitstring(a, n) << msg_str(strategy.encoding.at(a)) << "\n";

  os << "\nDecoding\n" << std::setw(w) << "b";
  const int gw = std::max(w, strategy.message_bits + 7);
  for (int msg = 0; msg < messages; ++msg) os << std::setw(gw) << ("g(b," + msg_str(msg) + ")");
  os << "\n";
  for (const IndexSet& b : layout.measurements()) {
    os << std::setw(w) << to_bitstring(b, n);
    for (int msg = 0; msg < messages; ++msg) os << std::setw(gw) << strategy.decoding.at({b, msg});
    os << "\n";
  }

  os << "\nScenarios\n" << std::setw(4) << "s" << std::setw(w) << "a" << std::setw(w) << "b" << std::setw(w) << "r(a)"
     << "guess\n";
  for (const ScenarioRow& r : layout.rows()) {
    const int msg = strategy.encoding.at(r.a);
    const int guess = strategy.decoding.at({r.b, msg});
    os << std::setw(4) << r.s << std::setw(w) << to_bitstring(r.a, n) << std::setw(w) << to_bitstring(r.b, n) << std::setw(w)
       << msg_str(msg) << guess << (guess == r.s ? "" : " *") << "\n";
  }
  return os.str();
}

}  // namespace picomm
