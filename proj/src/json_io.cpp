#include "qnm/json_io.hpp"

namespace qnm {

Json matrix_to_json(const Mat& m) {
  Json data = Json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Mat matrix_from_json(const Json& j) {
  int rows = j.at("rows").get<int>();
  int cols = j.at("cols").get<int>();
  const Json& data = j.at("data");
  if (static_cast<int>(data.size()) != rows * cols)
    throw std::invalid_argument("matrix_from_json: entry count mismatch");
  Mat m(rows, cols);
  int idx = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c, ++idx)
      m(r, c) = cxd(data[idx][0].get<double>(), data[idx][1].get<double>());
  return m;
}

Json layout_to_json(const SystemLayout& l) {
  Json regs = Json::array();
  for (const auto& r : l.registers())
    regs.push_back(Json{{"label", r.label}, {"dim", r.dim}});
  return regs;
}

SystemLayout layout_from_json(const Json& j) {
  std::vector<Register> regs;
  for (const auto& r : j)
    regs.push_back({r.at("label").get<std::string>(), r.at("dim").get<int>()});
  return SystemLayout(std::move(regs));
}

Json channel_to_json(const QuantumChannel& ch) {
  Json out{{"in", layout_to_json(ch.in_layout())},
           {"out", layout_to_json(ch.out_layout())}};
  out["kind"] = "choi";
  out["choi"] = matrix_to_json(ch.choi());
  return out;
}

QuantumChannel channel_from_json(const Json& j) {
  SystemLayout in = layout_from_json(j.at("in"));
  SystemLayout out = layout_from_json(j.at("out"));
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "choi")
    return QuantumChannel::from_choi(matrix_from_json(j.at("choi")), in, out);
  if (kind == "superop")
    return QuantumChannel::from_superop(matrix_from_json(j.at("superop")), in, out);
  if (kind == "kraus") {
    std::vector<Mat> ks;
    for (const auto& k : j.at("kraus")) ks.push_back(matrix_from_json(k));
    return QuantumChannel::from_kraus(std::move(ks), in, out);
  }
  throw std::invalid_argument("channel_from_json: unknown kind " + kind);
}

Json ensemble_to_json(const UnitaryEnsemble& e) {
  Json elems = Json::array();
  for (const auto& el : e.elements)
    elems.push_back(Json{{"unitary", matrix_to_json(el.unitary)}, {"weight", el.weight}});
  return Json{{"dim", e.dim}, {"provenance", e.provenance}, {"elements", std::move(elems)}};
}

UnitaryEnsemble ensemble_from_json(const Json& j) {
  UnitaryEnsemble e;
  e.dim = j.at("dim").get<int>();
  e.provenance = j.at("provenance").get<std::string>();
  for (const auto& el : j.at("elements"))
    e.elements.push_back({matrix_from_json(el.at("unitary")), el.at("weight").get<double>()});
  e.validate();
  return e;
}

Json deficiency_to_json(const DeficiencyReport& r) {
  static const char* names[] = {"t-design(1)", "t-design(2)", "uubar", "channel-twirl"};
  return Json{{"notion", names[static_cast<int>(r.notion)]},
              {"lower", r.lower},
              {"upper", r.upper},
              {"probes", r.probes}};
}

}  // namespace qnm
