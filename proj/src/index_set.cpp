#include "frx/index_set.hpp"

#include <algorithm>

#include "frx/error.hpp"

namespace frx {

namespace {

bool tail_bit(const std::string& pattern, long start, long s) {
  const auto p = static_cast<long>(pattern.size());
  return pattern[static_cast<std::size_t>((s - start) % p)] == '1';
}

std::string primitive_period(const std::string& pattern) {
  const std::size_t p = pattern.size();
  for (std::size_t d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < p && repeats; ++i) repeats = pattern[i] == pattern[i - d];
    if (repeats) return pattern.substr(0, d);
  }
  return pattern;
}

}  // namespace

IndexSet IndexSet::make(std::vector<long> explicit_part, std::optional<long> tail_start,
                        const std::string& pattern) {
  if (pattern.empty() || pattern.find_first_not_of("01") != std::string::npos) {
    fail(ErrorKind::kOutOfRange, "index pattern must be a nonempty string of 0/1 bits");
  }
  if (pattern.find('1') == std::string::npos) {
    fail(ErrorKind::kIndexSetFinite, "index pattern '" + pattern + "' has no 1 bit");
  }
  for (long s : explicit_part) {
    if (s < 1) fail(ErrorKind::kOutOfRange, "index elements must be positive integers");
  }
  std::sort(explicit_part.begin(), explicit_part.end());
  explicit_part.erase(std::unique(explicit_part.begin(), explicit_part.end()), explicit_part.end());

  IndexSet set;
  set.explicit_ = std::move(explicit_part);
  set.tail_start_ = tail_start ? *tail_start : (set.explicit_.empty() ? 1 : set.explicit_.back() + 1);
  if (set.tail_start_ < 1) fail(ErrorKind::kOutOfRange, "index tail start must be >= 1");
  set.pattern_ = pattern;
  set.canonicalize();
  return set;
}

IndexSet IndexSet::naturals() { return make({}, 1, "1"); }
IndexSet IndexSet::evens() { return make({}, 1, "01"); }
IndexSet IndexSet::odds() { return make({}, 1, "10"); }

void IndexSet::canonicalize() {
  // Push the tail start past the explicit part, folding tail members in.
  if (!explicit_.empty() && explicit_.back() >= tail_start_) {
    const long new_start = explicit_.back() + 1;
    std::vector<long> merged;
    for (long s : explicit_) {
      if (s < tail_start_) merged.push_back(s);
    }
    for (long s = tail_start_; s < new_start; ++s) {
      if (tail_bit(pattern_, tail_start_, s) || std::binary_search(explicit_.begin(), explicit_.end(), s)) {
        merged.push_back(s);
      }
    }
    std::string rotated;
    for (std::size_t i = 0; i < pattern_.size(); ++i) {
      rotated.push_back(tail_bit(pattern_, tail_start_, new_start + static_cast<long>(i)) ? '1' : '0');
    }
    explicit_ = std::move(merged);
    tail_start_ = new_start;
    pattern_ = std::move(rotated);
  }

  pattern_ = primitive_period(pattern_);

  // Pull the tail start down while the element just below agrees with the tail.
  while (tail_start_ > 1) {
    const long below = tail_start_ - 1;
    const bool bit = pattern_.back() == '1';
    const bool listed = !explicit_.empty() && explicit_.back() == below;
    if (bit != listed) break;
    if (listed) explicit_.pop_back();
    pattern_ = pattern_.back() + pattern_.substr(0, pattern_.size() - 1);
    tail_start_ = below;
  }
}

bool IndexSet::contains(long s) const {
  if (s < 1) return false;
  if (s < tail_start_) return std::binary_search(explicit_.begin(), explicit_.end(), s);
  return tail_bit(pattern_, tail_start_, s);
}

std::vector<long> IndexSet::first(std::size_t count) const {
  std::vector<long> out;
  out.reserve(count);
  for (long s : explicit_) {
    if (out.size() == count) return out;
    out.push_back(s);
  }
  for (long s = tail_start_; out.size() < count; ++s) {
    if (tail_bit(pattern_, tail_start_, s)) out.push_back(s);
  }
  return out;
}

Rational IndexSet::dyadic_weight() const {
  auto power_of_half = [](long s) {
    Integer d;
    mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(s));
    return Rational(Integer(1), d);
  };
  Rational total = 0;
  for (long s : explicit_) total += power_of_half(s);
  Rational one_period = 0;
  for (std::size_t i = 0; i < pattern_.size(); ++i) {
    if (pattern_[i] == '1') one_period += power_of_half(tail_start_ + static_cast<long>(i));
  }
  total += one_period / (Rational(1) - power_of_half(static_cast<long>(pattern_.size())));
  total.canonicalize();
  return total;
}

std::string IndexSet::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < explicit_.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(explicit_[i]);
  }
  if (!explicit_.empty()) out += "; ";
  out += "from=" + std::to_string(tail_start_) + ", period=" + pattern_ + "}";
  return out;
}

}  // namespace frx
