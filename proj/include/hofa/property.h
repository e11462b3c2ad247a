#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hofa/function.h"

namespace hofa {

struct NearestMember {
  double distance = 0.0;  // normalized Hamming distance
  FiniteFunction member;
};

// An affine-invariant property of functions F_p^k -> [R], exposed through
// membership and exhaustive enumeration at small dimension.
class PropertyOracle {
 public:
  virtual ~PropertyOracle() = default;

  virtual std::string name() const = 0;
  virtual int p() const = 0;
  virtual int alphabet() const = 0;
  virtual bool is_member(const FiniteFunction& h) const = 0;
  // Calls visit(values) for every member on F_p^k until it returns false.
  virtual void for_each_member(int k,
                               const std::function<bool(std::span<const std::uint8_t>)>& visit) const = 0;

  std::vector<FiniteFunction> enumerate_members(int k) const;
  // Exact minimum over members. Subclasses may override with a faster route.
  virtual NearestMember nearest_member(const FiniteFunction& h) const;
  virtual double distance(const FiniteFunction& h) const { return nearest_member(h).distance; }
};

inline constexpr std::uint64_t kMaxPropertyMembers = std::uint64_t{1} << 22;

// Reed-Muller code RM(d): x -> |P(x)| for classical P of degree <= d, p in {2, 3}.
class ReedMullerProperty : public PropertyOracle {
 public:
  ReedMullerProperty(int p, int degree);

  std::string name() const override;
  int p() const override { return p_; }
  int alphabet() const override { return p_; }
  int degree() const { return degree_; }
  bool is_member(const FiniteFunction& h) const override;
  void for_each_member(int k,
                       const std::function<bool(std::span<const std::uint8_t>)>& visit) const override;
  NearestMember nearest_member(const FiniteFunction& h) const override;

 private:
  int p_;
  int degree_;
};

// P_delta: functions within delta of the base property.
class DeltaCloseProperty : public PropertyOracle {
 public:
  DeltaCloseProperty(std::shared_ptr<const PropertyOracle> base, double delta);

  std::string name() const override;
  int p() const override { return base_->p(); }
  int alphabet() const override { return base_->alphabet(); }
  bool is_member(const FiniteFunction& h) const override;
  // Enumerates every function and filters; only for tiny k.
  void for_each_member(int k,
                       const std::function<bool(std::span<const std::uint8_t>)>& visit) const override;
  // max(0, D - floor(delta N)) / N where D is the Hamming count to the base.
  double distance(const FiniteFunction& h) const override;
  NearestMember nearest_member(const FiniteFunction& h) const override;

 private:
  std::shared_ptr<const PropertyOracle> base_;
  double delta_;
};

// Explicit member list, e.g. loaded from concatenated function files.
class EnumeratedProperty : public PropertyOracle {
 public:
  EnumeratedProperty(std::string name, std::vector<FiniteFunction> members);

  std::string name() const override { return name_; }
  int p() const override { return p_; }
  int alphabet() const override { return alphabet_; }
  bool is_member(const FiniteFunction& h) const override;
  void for_each_member(int k,
                       const std::function<bool(std::span<const std::uint8_t>)>& visit) const override;

 private:
  std::string name_;
  int p_ = 2;
  int alphabet_ = 2;
  std::vector<FiniteFunction> members_;
};

// Fast exact distance to RM(d) (Walsh-Hadamard route for p = 2, d = 1).
double rm_distance(const FiniteFunction& h, int d);
// Generic exact distance through the oracle's member enumeration.
double property_distance(const FiniteFunction& h, const PropertyOracle& property);

// Parses "rm:D" (optionally "rm:D:p"), "delta:X:<spec>" and "file:PATH".
std::shared_ptr<const PropertyOracle> make_property(const std::string& spec, int p);

struct InvarianceReport {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
};

// Samples members at dimension k and invertible affine maps; checks membership of h o A.
InvarianceReport check_affine_invariance(const PropertyOracle& property, int k,
                                         std::uint64_t samples, std::uint64_t seed);

}  // namespace hofa
