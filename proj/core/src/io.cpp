#include "qtl/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "qtl/errors.hpp"

namespace qtl::io {

namespace {

using nlohmann::json;

constexpr std::array<const char*, 4> kComponents = {"w", "x", "y", "z"};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Index read_dim(const json& dims, std::size_t i) {
  const auto& v = dims.at(i);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ShapeError("dims[" + std::to_string(i) + "] must be a positive integer");
  }
  return static_cast<Index>(v.get<long long>());
}

double component(const Quat& q, std::size_t which) {
  switch (which) {
    case 0: return q.w;
    case 1: return q.x;
    case 2: return q.y;
    default: return q.z;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return "n/a";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

}  // namespace

QTensor parse_tensor(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    const auto [line, col] = line_column(text, ex.byte > 0 ? ex.byte - 1 : 0);
    throw ParseError("tensor file: parse error at line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + ex.what(),
                     line, col);
  }
  if (!doc.is_object()) throw ParseError("tensor file: top level must be an object");
  if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].size() != 3) {
    throw ShapeError("tensor file: \"dims\" must be an array [n1, n2, n3]");
  }
  const Index n1 = read_dim(doc["dims"], 0);
  const Index n2 = read_dim(doc["dims"], 1);
  const Index n3 = read_dim(doc["dims"], 2);

  std::vector<Eigen::MatrixXd> parts[4];
  for (std::size_t p = 0; p < kComponents.size(); ++p) {
    const std::string name = kComponents[p];
    if (!doc.contains(name)) throw ShapeError("tensor file: missing component \"" + name + "\"");
    const json& arr = doc[name];
    if (!arr.is_array() || static_cast<Index>(arr.size()) != n3) {
      throw ShapeError("component \"" + name + "\": expected " + std::to_string(n3) +
                       " slices, got " + std::to_string(arr.is_array() ? arr.size() : 0));
    }
    for (Index t = 0; t < n3; ++t) {
      const json& sl = arr[static_cast<std::size_t>(t)];
      if (!sl.is_array() || static_cast<Index>(sl.size()) != n1) {
        throw ShapeError("component \"" + name + "\" slice " + std::to_string(t) +
                         ": expected " + std::to_string(n1) + " rows");
      }
      Eigen::MatrixXd m(n1, n2);
      for (Index r = 0; r < n1; ++r) {
        const json& row = sl[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != n2) {
          throw ShapeError("component \"" + name + "\" slice " + std::to_string(t) + " row " +
                           std::to_string(r) + ": expected " + std::to_string(n2) + " columns");
        }
        for (Index c = 0; c < n2; ++c) {
          const json& v = row[static_cast<std::size_t>(c)];
          if (!v.is_number()) {
            throw ParseError("component \"" + name + "\": non-numeric entry at [" +
                             std::to_string(t) + "][" + std::to_string(r) + "][" +
                             std::to_string(c) + "]");
          }
          m(r, c) = v.get<double>();
        }
      }
      parts[p].push_back(std::move(m));
    }
  }

  std::vector<QMat> slices;
  slices.reserve(static_cast<std::size_t>(n3));
  for (Index t = 0; t < n3; ++t) {
    const auto ts = static_cast<std::size_t>(t);
    CMat d(n1, n2);
    CMat c(n1, n2);
    d.real() = parts[0][ts];
    d.imag() = parts[1][ts];
    c.real() = parts[2][ts];
    c.imag() = -parts[3][ts];
    slices.emplace_back(std::move(d), std::move(c));
  }
  return QTensor(std::move(slices));
}

std::string format_tensor(const QTensor& a) {
  std::ostringstream os;
  os << "{\n  \"dims\": [" << a.n1() << ", " << a.n2() << ", " << a.n3() << "]";
  for (std::size_t p = 0; p < kComponents.size(); ++p) {
    os << ",\n  \"" << kComponents[p] << "\": [";
    for (Index t = 0; t < a.n3(); ++t) {
      os << (t == 0 ? "\n    [" : ",\n    [");
      for (Index r = 0; r < a.n1(); ++r) {
        json row = json::array();
        for (Index c = 0; c < a.n2(); ++c) row.push_back(component(a(r, c, t), p));
        os << (r == 0 ? "" : ", ") << row.dump();
      }
      os << "]";
    }
    os << "\n  ]";
  }
  os << "\n}\n";
  return os.str();
}

QTensor read_tensor(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_tensor(text);
  } catch (const ParseError& ex) {
    throw ParseError(path.string() + ": " + ex.what(), ex.line(), ex.column());
  } catch (const ShapeError& ex) {
    throw ShapeError(path.string() + ": " + ex.what());
  }
}

void write_tensor(const QTensor& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_tensor(a);
  if (!out) throw Error("write failed for " + path.string());
}

std::string file_digest(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed for " + path.string());
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return os.str();
}

std::string render_report_json(const PerturbReport& r, const ReportMeta& meta) {
  json doc = json::object();
  auto num = [&doc](const std::string& key, double v) {
    if (std::isfinite(v)) doc[key] = v;
  };
  auto opt = [&num](const std::string& key, const std::optional<double>& v) {
    if (v) num(key, *v);
  };

  doc["tool.version"] = meta.tool_version;
  for (const auto& [label, digest] : meta.input_digests) doc["input." + label + ".sha256"] = digest;
  if (meta.timestamp) doc["timestamp"] = *meta.timestamp;
  num("tolerance.core", r.options.core_tol);
  num("tolerance.identity", r.options.identity_tol);
  for (const auto& [name, v] : meta.tolerances) num("tolerance." + name, v);
  doc["tolerance.paranoid"] = r.options.spectral.paranoid;

  doc["index"] = r.index;
  num("hypothesis.cond_core_residual", r.cond_core_residual);
  doc["hypothesis.core_holds"] = r.core_holds;
  num("hypothesis.rho_value", r.rho_value);
  num("hypothesis.rho_swap", r.rho_swap);
  num("hypothesis.norm_value", r.norm_value);
  doc["hypothesis.trivial"] = r.trivial;
  doc["hypothesis.hold"] = r.hypotheses_hold;
  doc["hypothesis.failed"] = r.failed_hypothesis;

  doc["identities.computed"] = r.identities_computed;
  if (r.identities_computed) {
    num("identities.projector_residual", r.projector_residual);
    num("identities.diff_residual_left", r.diff_residual_left);
    num("identities.diff_residual_right", r.diff_residual_right);
    num("identities.resolvent_residual_left", r.resolvent_residual_left);
    num("identities.resolvent_residual_right", r.resolvent_residual_right);
    num("identities.scale", r.identity_scale);
    doc["identities.verified"] = r.identities_verified;
    num("norm.BD", r.norms.bd);
    num("norm.BD_minus_AD", r.norms.diff);
  }
  num("norm.A", r.norms.a);
  num("norm.AD", r.norms.ad);
  num("norm.AD_E", r.norms.ad_e);
  num("norm.E_AD", r.norms.e_ad);
  num("norm.E", r.norms.e);
  num("norm.A_AD", r.norms.a_ad);

  doc["bounds.computed"] = r.bounds.has_value();
  if (r.bounds) {
    const auto& b = *r.bounds;
    num("bounds.delta_lhs", b.delta_lhs);
    num("bounds.delta_rhs", b.delta_rhs);
    doc["bounds.delta_holds"] = b.delta_holds;
    num("bounds.lower", b.lower);
    num("bounds.upper", b.upper);
    num("bounds.lower_alt", b.lower_alt);
    opt("bounds.upper_alt", b.upper_alt);
    num("bounds.relative_error", b.relative_error);
    num("bounds.rel_bound", b.rel_bound);
    opt("bounds.rel_bound_mixed", b.rel_bound_mixed);
    opt("bounds.rel_bound_alt", b.rel_bound_alt);
    num("bounds.rel_bound_alt_mixed", b.rel_bound_alt_mixed);
    num("bounds.kappa", b.kappa);
    opt("bounds.kappa_bound", b.kappa_bound);
    doc["bounds.norm_bounds_hold"] = b.norm_bounds_hold;
    doc["bounds.relative_chain_holds"] = b.relative_chain_holds;
    doc["bounds.mixed_bound_holds"] = b.mixed_bound_holds;
    doc["bounds.alt_bound_holds"] = b.alt_bound_holds;
    doc["bounds.alt_mixed_bound_holds"] = b.alt_mixed_bound_holds;
  }
  for (std::size_t i = 0; i < r.notes.size(); ++i) {
    std::ostringstream key;
    key << "note." << std::setw(2) << std::setfill('0') << i;
    doc[key.str()] = r.notes[i];
  }
  return doc.dump(2) + "\n";
}

std::string render_report_text(const PerturbReport& r, const ReportMeta& meta) {
  std::ostringstream os;
  os << "QT-Drazin perturbation report (qtl " << meta.tool_version << ")\n";
  for (const auto& [label, digest] : meta.input_digests) {
    os << "  input " << label << "  sha256 " << digest << "\n";
  }
  if (meta.timestamp) os << "  generated " << *meta.timestamp << "\n";

  os << "\nHypotheses\n";
  os << "  Ind_QT(A)                          " << r.index << "\n";
  os << "  E = A*A^D*E*A*A^D residual         " << sci(r.cond_core_residual) << "  "
     << (r.core_holds ? "holds" : "FAILS") << "\n";
  os << "  rho_QT(A^D*E)                      " << fixed(r.rho_value) << "\n";
  os << "  rho_QT(E*A^D)                      " << fixed(r.rho_swap) << "\n";
  os << "  ||A^D*E||_s                        " << fixed(r.norm_value)
     << (r.norm_value < 1.0 ? " < 1" : " >= 1") << "\n";
  if (r.trivial) os << "  trivial perturbation (E = 0)\n";
  os << "  status                             "
     << (r.hypotheses_hold ? "satisfied" : "failed: " + r.failed_hypothesis) << "\n";

  os << "\nNorms\n";
  os << "  ||A||_s = " << fixed(r.norms.a) << "   ||E||_s = " << fixed(r.norms.e) << "\n";
  os << "  ||A^D||_s = " << fixed(r.norms.ad);
  if (r.identities_computed) {
    os << "   ||B^D||_s = " << fixed(r.norms.bd) << "   ||B^D-A^D||_s = " << fixed(r.norms.diff);
  }
  os << "\n  ||A^D*E||_s = " << fixed(r.norms.ad_e) << "   ||E*A^D||_s = " << fixed(r.norms.e_ad)
     << "\n";

  if (r.identities_computed) {
    os << "\nIdentities (residuals, scale " << fixed(r.identity_scale) << ")\n";
    os << "  A*A^D = B*B^D                      " << sci(r.projector_residual) << "\n";
    os << "  B^D-A^D = -B^D*E*A^D               " << sci(r.diff_residual_left) << "\n";
    os << "  B^D-A^D = -A^D*E*B^D               " << sci(r.diff_residual_right) << "\n";
    os << "  B^D = (I+A^D*E)^-1*A^D             " << sci(r.resolvent_residual_left) << "\n";
    os << "  B^D = A^D*(I+E*A^D)^-1             " << sci(r.resolvent_residual_right) << "\n";
    os << "  status                             "
       << (r.identities_verified ? "verified" : "NOT verified") << "\n";
  }

  if (r.bounds) {
    const auto& b = *r.bounds;
    os << "\nBounds\n";
    os << "  Delta: ||(I+A^D*E)^-1||_s = " << fixed(b.delta_lhs)
       << " <= 1/(1-||A^D*E||_s) = " << fixed(b.delta_rhs) << "  "
       << (b.delta_holds ? "holds" : "FAILS") << "\n";
    os << "  ||A^D||_s/(1+||A^D*E||_s) = " << fixed(b.lower) << " <= ||B^D||_s = "
       << fixed(r.norms.bd) << " <= ||A^D||_s/(1-||A^D*E||_s) = " << fixed(b.upper) << "\n";
    os << "  ||B^D-A^D||_s/||A^D||_s = " << fixed(b.relative_error)
       << " <= ||A^D*E||_s/(1-||A^D*E||_s) = " << fixed(b.rel_bound);
    if (b.kappa_bound) {
      os << " <= kappa-form = " << fixed(*b.kappa_bound);
    }
    os << "\n  kappa = ||A||_s*||A^D||_s = " << fixed(b.kappa) << "\n";
    os << "  chain " << (b.norm_bounds_hold && b.relative_chain_holds ? "holds" : "VIOLATED")
       << "\n";
  }
  if (!r.notes.empty()) {
    os << "\nNotes\n";
    for (const auto& n : r.notes) os << "  - " << n << "\n";
  }
  return os.str();
}

}  // namespace qtl::io
