#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigenbound {

// Eigenvalue profile of the covariance / signal matrix, kept together with
// the generating family so reports can say how a truncated spectrum arose.
class Spectrum {
 public:
  enum class Profile { Explicit, Spiked, Poly, Exp };

  static Spectrum from_values(std::vector<double> values) {
    return Spectrum(Profile::Explicit, std::move(values), 0, 0.0);
  }

  // d leading eigenvalues `hi`, the remaining p-d equal to `lo`.
  static Spectrum spiked(int p, int d, double hi, double lo) {
    if (p < 2 || d < 1 || d >= p)
      throw std::invalid_argument("Spectrum::spiked: need 1 <= d < p, p >= 2");
    if (!(hi >= lo)) throw std::invalid_argument("Spectrum::spiked: hi < lo");
    std::vector<double> v(static_cast<std::size_t>(p), lo);
    for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = hi;
    Spectrum s(Profile::Spiked, std::move(v), d, 0.0);
    return s;
  }

  // lambda_j = j^{-alpha-1}, truncated at dimension p.
  static Spectrum poly(double alpha, int p) {
    if (alpha <= 0.0) throw std::invalid_argument("Spectrum::poly: alpha <= 0");
    std::vector<double> v(static_cast<std::size_t>(p));
    for (int j = 1; j <= p; ++j)
      v[static_cast<std::size_t>(j - 1)] = std::pow(j, -alpha - 1.0);
    return Spectrum(Profile::Poly, std::move(v), 0, alpha);
  }

  // lambda_j = exp(-alpha j), truncated at dimension p.
  static Spectrum exponential(double alpha, int p) {
    if (alpha <= 0.0) throw std::invalid_argument("Spectrum::exp: alpha <= 0");
    std::vector<double> v(static_cast<std::size_t>(p));
    for (int j = 1; j <= p; ++j)
      v[static_cast<std::size_t>(j - 1)] = std::exp(-alpha * j);
    return Spectrum(Profile::Exp, std::move(v), 0, alpha);
  }

  int p() const { return static_cast<int>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  double operator[](int i) const {  // 1-based, matching index sets
    return values_.at(static_cast<std::size_t>(i - 1));
  }
  Profile profile() const { return profile_; }
  double alpha() const { return alpha_; }
  int spike_d() const { return spike_d_; }

  bool all_positive() const {
    for (double v : values_)
      if (!(v > 0.0)) return false;
    return true;
  }

  std::string profile_name() const {
    switch (profile_) {
      case Profile::Explicit: return "explicit";
      case Profile::Spiked: return "spiked";
      case Profile::Poly: return "poly";
      case Profile::Exp: return "exp";
    }
    return "explicit";
  }

 private:
  Spectrum(Profile profile, std::vector<double> values, int spike_d,
           double alpha)
      : profile_(profile),
        values_(std::move(values)),
        spike_d_(spike_d),
        alpha_(alpha) {
    if (values_.size() < 2)
      throw std::invalid_argument("Spectrum: need p >= 2");
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
      if (values_[i] < values_[i + 1])
        throw std::invalid_argument("Spectrum: values must be nonincreasing");
    for (double v : values_)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("Spectrum: values must be finite, >= 0");
  }

  Profile profile_;
  std::vector<double> values_;
  int spike_d_;
  double alpha_;
};

// Sorted set of 1-based eigenvalue ranks.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<int> members) : members_(std::move(members)) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
      if (members_[i] < 1)
        throw std::invalid_argument("IndexSet: indices are 1-based");
      if (i > 0 && members_[i] <= members_[i - 1])
        throw std::invalid_argument("IndexSet: must be strictly increasing");
    }
  }

  static IndexSet leading(int d) {
    std::vector<int> m(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i)] = i + 1;
    return IndexSet(std::move(m));
  }

  bool contains(int i) const {
    for (int m : members_)
      if (m == i) return true;
    return false;
  }

  IndexSet complement(int p) const {
    std::vector<int> out;
    for (int i = 1; i <= p; ++i)
      if (!contains(i)) out.push_back(i);
    return IndexSet(std::move(out));
  }

  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  int max_index() const { return members_.empty() ? 0 : members_.back(); }
  const std::vector<int>& members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  std::vector<int> members_;
};

}  // namespace eigenbound
