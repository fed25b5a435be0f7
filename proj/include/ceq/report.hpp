// Report rows shared by the CLI suites and the acceptance runner, plus a
// deterministic parallel map for independent evaluations.
#pragma once

#include <algorithm>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace ceq {

struct ReportRow {
  std::string id;
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct Report {
  std::vector<ReportRow> rows;

  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows)
      j.push_back({{"id", r.id},
                   {"suite", r.suite},
                   {"name", r.name},
                   {"pass", r.pass},
                   {"detail", r.detail},
                   {"seconds", r.seconds}});
    return j;
  }

  std::string to_csv() const {
    std::ostringstream os;
    os << "id,suite,name,pass,detail,seconds\n";
    auto clean = [](std::string s) {
      std::replace(s.begin(), s.end(), ',', ';');
      return s;
    };
    for (const auto& r : rows)
      os << r.id << ',' << r.suite << ',' << clean(r.name) << ',' << (r.pass ? "1" : "0") << ','
         << clean(r.detail) << ',' << r.seconds << '\n';
    return os.str();
  }
};

// Applies fn to every item on the global thread pool and collects results in
// input order, so reductions stay deterministic.
template <class Item, class Fn>
auto parallel_map(const std::vector<Item>& items, Fn&& fn) {
  using R = std::invoke_result_t<Fn, const Item&>;
  std::vector<std::future<R>> futures;
  futures.reserve(items.size());
  for (const auto& it : items)
    futures.push_back(std::async(std::launch::async, [&fn, &it] { return fn(it); }));
  std::vector<R> out;
  out.reserve(items.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

}  // namespace ceq
