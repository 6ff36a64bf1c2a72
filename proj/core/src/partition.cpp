#include "poisson_chaos/partition.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "poisson_chaos/error.hpp"

namespace poisson_chaos {

std::vector<int> Partition::support() const {
  std::vector<int> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

void Partition::validate() const {
  std::set<int> seen;
  for (const auto& b : blocks) {
    if (b.empty()) throw InvalidArgument("partition: empty block");
    for (int e : b) {
      if (e < 1 || e > d) throw InvalidArgument("partition: element outside 1..d");
      if (!seen.insert(e).second) throw InvalidArgument("partition: blocks overlap");
    }
  }
}

std::string Partition::to_string() const {
  if (blocks.empty()) return "{}";
  std::string s;
  for (const auto& b : blocks) {
    s += '{';
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(b[i]);
    }
    s += '}';
  }
  return s;
}

std::vector<int> Partition::shape() const {
  std::vector<int> s;
  for (const auto& b : blocks) s.push_back(static_cast<int>(b.size()));
  std::sort(s.rbegin(), s.rend());
  return s;
}

Partition parse_partition(int d, const std::string& text) {
  Partition p;
  p.d = d;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  while (i < text.size()) {
    if (text[i] != '{') throw InvalidArgument("partition: expected '{' in \"" + text + "\"");
    ++i;
    std::vector<int> block;
    skip();
    while (i < text.size() && text[i] != '}') {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) throw InvalidArgument("partition: expected element in \"" + text + "\"");
      block.push_back(std::stoi(text.substr(i, j - i)));
      i = j;
      skip();
      if (i < text.size() && text[i] == ',') ++i;
      skip();
    }
    if (i >= text.size()) throw InvalidArgument("partition: unterminated block in \"" + text + "\"");
    ++i;
    if (!block.empty()) p.blocks.push_back(std::move(block));
    skip();
  }
  p.validate();
  return p;
}

std::vector<Partition> enumerate_partitions(int d, const std::vector<int>& elements) {
  std::vector<Partition> out;
  Partition cur;
  cur.d = d;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == elements.size()) {
      out.push_back(cur);
      return;
    }
    // Index access: the recursion may grow cur.blocks and move its storage.
    for (std::size_t b = 0; b < cur.blocks.size(); ++b) {
      cur.blocks[b].push_back(elements[i]);
      self(self, i + 1);
      cur.blocks[b].pop_back();
    }
    cur.blocks.push_back({elements[i]});
    self(self, i + 1);
    cur.blocks.pop_back();
  };
  rec(rec, 0);
  return out;
}

std::vector<ShapeClass> shape_classes(int d, const std::vector<int>& elements) {
  std::map<std::vector<int>, long long, std::greater<>> counts;
  for (const auto& p : enumerate_partitions(d, elements)) ++counts[p.shape()];
  std::vector<ShapeClass> out;
  for (const auto& [shape, mult] : counts) {
    ShapeClass c;
    c.representative.d = d;
    std::size_t next = 0;
    for (int size : shape) {
      std::vector<int> block(elements.begin() + static_cast<std::ptrdiff_t>(next),
                             elements.begin() + static_cast<std::ptrdiff_t>(next) + size);
      next += static_cast<std::size_t>(size);
      c.representative.blocks.push_back(std::move(block));
    }
    c.multiplicity = mult;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> range_set(int first, int last) {
  std::vector<int> out;
  for (int i = first; i <= last; ++i) out.push_back(i);
  return out;
}

}  // namespace poisson_chaos
