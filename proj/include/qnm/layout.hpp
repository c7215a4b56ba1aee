#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qnm {

/// A named tensor factor of a composite Hilbert space.
struct Register {
  std::string label;
  int dim = 1;
};

/// Ordered list of labelled registers. Equality is label-and-dim equality
/// in order; the total dimension is the product of the register dims.
class SystemLayout {
 public:
  SystemLayout() = default;
  SystemLayout(std::initializer_list<Register> regs);
  explicit SystemLayout(std::vector<Register> regs);

  static SystemLayout single(const std::string& label, int dim);

  int dim() const { return dim_; }
  int num_registers() const { return static_cast<int>(regs_.size()); }
  const Register& reg(int i) const { return regs_.at(i); }
  const std::vector<Register>& registers() const { return regs_; }

  bool has(const std::string& label) const;
  int index_of(const std::string& label) const;  // throws on unknown label

  /// Concatenation; throws on duplicate labels.
  SystemLayout concat(const SystemLayout& other) const;
  SystemLayout without(const std::vector<std::string>& labels) const;

  /// Row-major stride of register i (product of dims to its right).
  int stride(int i) const;

  bool operator==(const SystemLayout& other) const;
  bool operator!=(const SystemLayout& other) const { return !(*this == other); }

  std::string to_string() const;

 private:
  void rebuild();
  std::vector<Register> regs_;
  int dim_ = 1;
};

}  // namespace qnm
