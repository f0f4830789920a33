#include <istream>
#include <ostream>

#include "json.hpp"
#include "subsetq/harness.hpp"

namespace subsetq {

void write_instance(std::ostream& out, const Clustering& clustering) {
  nlohmann::json j = {{"n", clustering.n()},
                      {"k", clustering.k()},
                      {"labels", std::vector<Label>(clustering.labels().begin(), clustering.labels().end())}};
  out << j.dump() << '\n';
}

Clustering read_instance(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("instance is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("k") || !j.contains("labels")) {
    throw std::invalid_argument("instance needs n, k and labels");
  }
  auto n = j.at("n").get<std::size_t>();
  auto k = j.at("k").get<std::size_t>();
  auto labels = j.at("labels").get<std::vector<Label>>();
  if (labels.size() != n) throw std::invalid_argument("label count differs from n");
  for (Label l : labels) {
    if (l >= k) throw std::invalid_argument("label out of range [0, k)");
  }
  Clustering c(std::move(labels));
  if (c.k() != k) throw std::invalid_argument("some cluster index in [0, k) is unused");
  return c;
}

}  // namespace subsetq
