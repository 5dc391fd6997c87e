#include <fstream>
#include <sstream>

#include "bdpr/error.hpp"
#include "bdpr/io.hpp"
#include "bdpr/rng.hpp"

namespace bdpr {

Json complex_matrix_to_json(const CMatrix& a) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.push_back(a(i, j).real());
      out.push_back(a(i, j).imag());
    }
  }
  return out;
}

CMatrix complex_matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != 2 * rows * cols) {
    throw IoError("expected " + std::to_string(2 * rows * cols) + " interleaved re/im values");
  }
  CMatrix a(rows, cols);
  std::size_t p = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      a(i, c) = Complex(j[p].get<double>(), j[p + 1].get<double>());
      p += 2;
    }
  }
  return a;
}

Json complex_vector_to_json(const CVector& v) { return complex_matrix_to_json(v); }

CVector complex_vector_from_json(const Json& j, Eigen::Index size) {
  return complex_matrix_from_json(j, size, 1);
}

Json real_vector_to_json(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

RVector real_vector_from_json(const Json& j, Eigen::Index size) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size) {
    throw IoError("expected a real vector of length " + std::to_string(size));
  }
  RVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

Json instance_to_json(const ProblemInstance& inst) {
  Json j;
  j["version"] = kInstanceFormatVersion;
  j["m"] = inst.m();
  j["k"] = inst.k();
  j["n"] = inst.n();
  j["model"] = to_string(inst.model);
  j["subspace_b"] = to_string(inst.subspace_b);
  j["subspace_c"] = to_string(inst.subspace_c);
  j["seed"] = inst.seed;
  j["rng"] = Rng::kName;
  j["B"] = complex_matrix_to_json(inst.B);
  j["C"] = complex_matrix_to_json(inst.C);
  j["y"] = real_vector_to_json(inst.y);
  j["delta"] = real_vector_to_json(inst.delta);
  if (inst.truth) {
    j["truth"] = {{"h", complex_vector_to_json(inst.truth->h)},
                  {"m", complex_vector_to_json(inst.truth->m)}};
  }
  return j;
}

ProblemInstance instance_from_json(const Json& j) {
  try {
    if (j.at("version").get<int>() != kInstanceFormatVersion) {
      throw IoError("unsupported instance version " + j.at("version").dump());
    }
    const auto m = j.at("m").get<Eigen::Index>();
    const auto k = j.at("k").get<Eigen::Index>();
    const auto n = j.at("n").get<Eigen::Index>();
    if (m <= 0 || k <= 0 || n <= 0) throw IoError("dimensions must be positive");
    ProblemInstance inst{parse_ensemble_model(j.at("model").get<std::string>()),
                         parse_subspace_kind(j.at("subspace_b").get<std::string>()),
                         parse_subspace_kind(j.at("subspace_c").get<std::string>()),
                         j.at("seed").get<std::uint64_t>(),
                         complex_matrix_from_json(j.at("B"), m, k),
                         complex_matrix_from_json(j.at("C"), m, n),
                         {},
                         real_vector_from_json(j.at("y"), m),
                         real_vector_from_json(j.at("delta"), m),
                         std::nullopt};
    inst.ensemble = make_ensemble(inst.model, inst.B, inst.C);
    if (j.contains("truth")) {
      const Json& t = j.at("truth");
      inst.truth = GroundTruth{complex_vector_from_json(t.at("h"), k),
                               complex_vector_from_json(t.at("m"), n)};
    }
    validate_instance(inst);
    return inst;
  } catch (const IoError&) {
    throw;
  } catch (const Json::exception& e) {
    throw IoError(std::string("malformed instance document: ") + e.what());
  } catch (const Error& e) {
    throw IoError(std::string("invalid instance document: ") + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

ProblemInstance read_instance(const std::filesystem::path& path) {
  try {
    return instance_from_json(read_json_file(path));
  } catch (const IoError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw IoError(path.string() + ": " + what);
  }
}

void write_instance(const std::filesystem::path& path, const ProblemInstance& inst) {
  write_json_file(path, instance_to_json(inst));
}

}  // namespace bdpr
