#include "jetpot/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace jetpot {

json jet_to_json(const Jet& J) {
  json j;
  j["r"] = J.r;
  j["p"] = std::vector<double>(J.p.data(), J.p.data() + J.p.size());
  j["A"] = mat_to_json(J.A);
  return j;
}

json mat_to_json(const Mat& A) {
  json rows = json::array();
  for (int i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw PreconditionError("matrix: expected array of rows");
  const int n = static_cast<int>(j.size());
  Mat A(n, static_cast<int>(j[0].size()));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(j[i].size()) != A.cols())
      throw PreconditionError("matrix: ragged rows");
    for (int k = 0; k < A.cols(); ++k) A(i, k) = j[i][k].get<double>();
  }
  return A;
}

Jet jet_from_json(const json& j, int expect_dim) {
  Jet J;
  J.r = j.at("r").get<double>();
  const auto& pj = j.at("p");
  J.p = Vec(pj.size());
  for (size_t i = 0; i < pj.size(); ++i) J.p(static_cast<int>(i)) = pj[i].get<double>();
  J.A = mat_from_json(j.at("A"));
  if (J.A.rows() != J.p.size() || J.A.cols() != J.p.size())
    throw PreconditionError("jet: inconsistent dimensions");
  if (expect_dim >= 0 && J.dim() != expect_dim)
    throw PreconditionError("jet: unexpected dimension");
  return J;
}

json VerificationReport::to_json() const {
  json j;
  j["pass"] = pass;
  j["n_samples"] = n_samples;
  j["worst_margin"] = worst_margin;
  j["witness"] = witness ? jet_to_json(*witness) : json(nullptr);
  if (witness_pair) j["witness_pair"] = jet_to_json(*witness_pair);
  j["seed"] = seed;
  if (inconclusive) j["inconclusive"] = true;
  if (!note.empty()) j["note"] = note;
  return j;
}

namespace {

void emit(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad;
        out += json(it.key()).dump();
        out += ": ";
        emit(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        out += pad;
        emit(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += close_pad + "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isnan(v)) {
        out += "\"nan\"";
      } else if (std::isinf(v)) {
        out += v > 0 ? "\"inf\"" : "\"-inf\"";
      } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        out += buf;
      }
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string emit_json(const json& j, int indent) {
  std::string out;
  emit(j, out, indent, 0);
  out += "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << contents;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace jetpot
