#pragma once

#include <algorithm>
#include <utility>
#include <vector>

namespace limsup {

template <class T>
struct Interval {
  T lo;
  T hi;
};

// Finite union of intervals kept sorted and merged. T is double or an exact
// rational type. For double, intervals whose gap is below `tol` are merged.
template <class T>
class IntervalSet {
 public:
  IntervalSet() = default;

  static IntervalSet from_unsorted(std::vector<Interval<T>> parts, T tol = T(0)) {
    IntervalSet s;
    std::sort(parts.begin(), parts.end(),
              [](const Interval<T>& a, const Interval<T>& b) { return a.lo < b.lo; });
    for (auto& p : parts) {
      if (!(p.lo < p.hi)) continue;
      if (!s.parts_.empty() && !(s.parts_.back().hi + tol < p.lo)) {
        if (s.parts_.back().hi < p.hi) s.parts_.back().hi = p.hi;
      } else {
        s.parts_.push_back(p);
      }
    }
    return s;
  }

  const std::vector<Interval<T>>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  T measure() const {
    T total(0);
    for (const auto& p : parts_) total += p.hi - p.lo;
    return total;
  }

  IntervalSet clipped(T lo, T hi) const {
    IntervalSet s;
    for (const auto& p : parts_) {
      T a = p.lo < lo ? lo : p.lo;
      T b = hi < p.hi ? hi : p.hi;
      if (a < b) s.parts_.push_back({a, b});
    }
    return s;
  }

  // Two-pointer sweep over both sorted lists.
  IntervalSet intersect(const IntervalSet& other) const {
    IntervalSet s;
    std::size_t i = 0, j = 0;
    const auto& a = parts_;
    const auto& b = other.parts_;
    while (i < a.size() && j < b.size()) {
      T lo = a[i].lo < b[j].lo ? b[j].lo : a[i].lo;
      T hi = a[i].hi < b[j].hi ? a[i].hi : b[j].hi;
      if (lo < hi) s.parts_.push_back({lo, hi});
      if (a[i].hi < b[j].hi)
        ++i;
      else
        ++j;
    }
    return s;
  }

  IntervalSet unite(const IntervalSet& other, T tol = T(0)) const {
    std::vector<Interval<T>> all(parts_);
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return from_unsorted(std::move(all), tol);
  }

 private:
  std::vector<Interval<T>> parts_;
};

}  // namespace limsup
