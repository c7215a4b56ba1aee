#include "qnm/layout.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qnm {

SystemLayout::SystemLayout(std::initializer_list<Register> regs)
    : regs_(regs) {
  rebuild();
}

SystemLayout::SystemLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
  rebuild();
}

SystemLayout SystemLayout::single(const std::string& label, int dim) {
  return SystemLayout({Register{label, dim}});
}

void SystemLayout::rebuild() {
  std::set<std::string> seen;
  dim_ = 1;
  for (const auto& r : regs_) {
    if (r.dim < 1) throw std::invalid_argument("register dim must be positive: " + r.label);
    if (!seen.insert(r.label).second)
      throw std::invalid_argument("duplicate register label: " + r.label);
    dim_ *= r.dim;
  }
}

bool SystemLayout::has(const std::string& label) const {
  return std::any_of(regs_.begin(), regs_.end(),
                     [&](const Register& r) { return r.label == label; });
}

int SystemLayout::index_of(const std::string& label) const {
  for (size_t i = 0; i < regs_.size(); ++i)
    if (regs_[i].label == label) return static_cast<int>(i);
  throw std::out_of_range("unknown register: " + label);
}

SystemLayout SystemLayout::concat(const SystemLayout& other) const {
  std::vector<Register> regs = regs_;
  regs.insert(regs.end(), other.regs_.begin(), other.regs_.end());
  return SystemLayout(std::move(regs));
}

SystemLayout SystemLayout::without(const std::vector<std::string>& labels) const {
  std::vector<Register> kept;
  for (const auto& r : regs_) {
    if (std::find(labels.begin(), labels.end(), r.label) == labels.end())
      kept.push_back(r);
  }
  return SystemLayout(std::move(kept));
}

int SystemLayout::stride(int i) const {
  int s = 1;
  for (size_t k = i + 1; k < regs_.size(); ++k) s *= regs_[k].dim;
  return s;
}

bool SystemLayout::operator==(const SystemLayout& other) const {
  if (regs_.size() != other.regs_.size()) return false;
  for (size_t i = 0; i < regs_.size(); ++i)
    if (regs_[i].label != other.regs_[i].label || regs_[i].dim != other.regs_[i].dim)
      return false;
  return true;
}

std::string SystemLayout::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < regs_.size(); ++i) {
    if (i) os << ", ";
    os << regs_[i].label << ":" << regs_[i].dim;
  }
  os << "]";
  return os.str();
}

}  // namespace qnm
