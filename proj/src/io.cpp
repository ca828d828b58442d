#include "tenfold/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tenfold/models.hpp"

namespace tenfold {

namespace {

using nlohmann::json;

json matrix_to_json(const CMatrix& M) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json rr = json::array();
        json ri = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            rr.push_back(M(i, j).real());
            ri.push_back(M(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

CMatrix matrix_from_json(const json& j, int rows, int cols, const std::string& what) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) throw IoError(what + ": matrix needs re and im");
    const json& re = j.at("re");
    const json& im = j.at("im");
    if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != rows || static_cast<int>(im.size()) != rows)
        throw IoError(what + ": expected " + std::to_string(rows) + " rows");
    CMatrix M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& rr = re[static_cast<std::size_t>(i)];
        const json& ri = im[static_cast<std::size_t>(i)];
        if (!rr.is_array() || !ri.is_array() || static_cast<int>(rr.size()) != cols ||
            static_cast<int>(ri.size()) != cols)
            throw IoError(what + ": expected " + std::to_string(cols) + " columns");
        for (int c = 0; c < cols; ++c) {
            const json& a = rr[static_cast<std::size_t>(c)];
            const json& b = ri[static_cast<std::size_t>(c)];
            if (!a.is_number() || !b.is_number()) throw IoError(what + ": non-numeric entry");
            M(i, c) = cplx(a.get<double>(), b.get<double>());
        }
    }
    return M;
}

json matrices_to_json(const std::vector<CMatrix>& v) {
    json a = json::array();
    for (const auto& M : v) a.push_back(matrix_to_json(M));
    return a;
}

std::vector<CMatrix> matrices_from_json(const json& j, int N, const std::string& what) {
    if (!j.is_array()) throw IoError(what + ": expected an array");
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_from_json(j[i], N, N, what + "[" + std::to_string(i) + "]"));
    return out;
}

json ops_to_json(const SymmetryOps& ops) {
    json o = json::object();
    if (ops.T) o["T"] = matrix_to_json(*ops.T);
    if (ops.C) o["C"] = matrix_to_json(*ops.C);
    if (ops.S) o["S"] = matrix_to_json(*ops.S);
    return o;
}

SymmetryOps ops_from_json(const json& j, int N) {
    if (!j.is_object()) throw IoError("ops: expected an object");
    SymmetryOps ops;
    ops.N = N;
    if (j.contains("T")) ops.T = matrix_from_json(j.at("T"), N, N, "ops.T");
    if (j.contains("C")) ops.C = matrix_from_json(j.at("C"), N, N, "ops.C");
    if (j.contains("S")) ops.S = matrix_from_json(j.at("S"), N, N, "ops.S");
    return ops;
}

json provenance_to_json(const std::map<std::string, std::string>& p) {
    json o = json::object();
    for (const auto& [k, v] : p) o[k] = v;
    return o;
}

std::map<std::string, std::string> provenance_from_json(const json& j) {
    std::map<std::string, std::string> p;
    if (!j.is_object()) throw IoError("provenance: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) p[it.key()] = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
    return p;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("malformed document: ") + e.what());
    }
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw IoError(std::string("field '") + key + "' has the wrong type");
    }
}

void check_version(const json& j, const char* format) {
    if (field<std::string>(j, "format") != format) throw IoError(std::string("expected a ") + format + " document");
    const int v = field<int>(j, "format_version");
    if (v != kFormatVersion) throw IoError("unsupported format_version " + std::to_string(v));
}

CMatrix round_projection(const CMatrix& P, double margin, int j, std::vector<std::string>& log) {
    const CMatrix H = 0.5 * (P + P.adjoint());
    const EigResult e = hermitian_eig(H);
    CMatrix R = CMatrix::Zero(P.rows(), P.cols());
    for (Eigen::Index i = 0; i < e.values.size(); ++i) {
        const double lam = e.values(i);
        if (std::abs(lam - 0.5) < margin) {
            throw ValidationFailed("sample " + std::to_string(j) + ": eigenvalue " + std::to_string(lam) +
                                   " is within the repair margin of 1/2");
        }
        if (lam > 0.5) R += e.vectors.col(i) * e.vectors.col(i).adjoint();
    }
    const double change = op_norm(R - P);
    if (change > 0.0) {
        std::ostringstream os;
        os << "repaired sample " << j << " (change " << change << ")";
        log.push_back(os.str());
    }
    return R;
}

}  // namespace

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

FamilyDocument parse_family_document(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw IoError("document must be an object");
    check_version(j, "tenfold-family");
    FamilyDocument doc;
    doc.class_name = field<std::string>(j, "class");
    doc.d = field<int>(j, "d");
    doc.n = field<int>(j, "n");
    doc.N = field<int>(j, "N");
    doc.g = field<int>(j, "g");
    if (doc.d != 0 && doc.d != 1) throw IoError("d must be 0 or 1");
    if (doc.N < 1 || doc.n < 0 || doc.n > doc.N) throw IoError("inconsistent n, N");
    if (doc.g < 0 || (doc.d == 1 && doc.g < 1)) throw IoError("invalid g");
    const std::size_t count = doc.d == 0 ? 1 : static_cast<std::size_t>(2 * doc.g + 1);
    doc.ops = ops_from_json(j.contains("ops") ? j.at("ops") : json::object(), doc.N);
    const bool has_p = j.contains("samples");
    const bool has_h = j.contains("hamiltonians");
    if (has_p == has_h) throw IoError("exactly one of samples and hamiltonians is required");
    if (has_p) {
        doc.samples = matrices_from_json(j.at("samples"), doc.N, "samples");
        if (doc.samples.size() != count) throw IoError("expected " + std::to_string(count) + " samples");
    } else {
        doc.hamiltonians = matrices_from_json(j.at("hamiltonians"), doc.N, "hamiltonians");
        if (doc.hamiltonians.size() != count) throw IoError("expected " + std::to_string(count) + " hamiltonians");
        doc.fermi_level = field<double>(j, "fermi_level");
    }
    if (j.contains("provenance")) doc.provenance = provenance_from_json(j.at("provenance"));
    return doc;
}

std::string dump_family_document(const FamilyDocument& doc) {
    json j;
    j["format"] = "tenfold-family";
    j["format_version"] = doc.format_version;
    j["class"] = doc.class_name;
    j["d"] = doc.d;
    j["n"] = doc.n;
    j["N"] = doc.N;
    j["g"] = doc.g;
    j["ops"] = ops_to_json(doc.ops);
    if (!doc.hamiltonians.empty()) {
        j["hamiltonians"] = matrices_to_json(doc.hamiltonians);
        j["fermi_level"] = doc.fermi_level.value_or(0.0);
    } else {
        j["samples"] = matrices_to_json(doc.samples);
    }
    j["provenance"] = provenance_to_json(doc.provenance);
    return j.dump(1) + "\n";
}

FamilyDocument read_family_document(const std::string& path) { return parse_family_document(read_text(path)); }

void write_family_document(const std::string& path, const FamilyDocument& doc) {
    write_text(path, dump_family_document(doc));
}

IngestResult ingest(const FamilyDocument& doc, const IngestOptions& opts) {
    IngestResult r;
    try {
        r.label = parse_class_label(doc.class_name);
    } catch (const std::exception&) {
        throw IoError("unknown class '" + doc.class_name + "'");
    }
    const CartanClass& cls = cartan_class(r.label);
    r.ops = doc.ops;
    r.ops.N = doc.N;
    const std::vector<double> k = doc.d == 0 ? std::vector<double>{0.0} : k_grid(doc.g);
    if (!doc.hamiltonians.empty()) {
        r.family = family_from_hamiltonians(doc.hamiltonians, k, doc.d, doc.fermi_level.value_or(0.0),
                                            opts.tol.gap_min);
    } else {
        r.family.d = doc.d;
        r.family.N = doc.N;
        r.family.k = k;
        r.family.P = doc.samples;
        if (opts.repair) {
            for (std::size_t j = 0; j < r.family.P.size(); ++j)
                r.family.P[j] = round_projection(r.family.P[j], opts.repair_margin, static_cast<int>(j), r.log);
        }
        r.family.n = r.family.P.empty() ? 0 : static_cast<int>(std::lround(r.family.P.front().trace().real()));
    }
    if (r.family.n != doc.n) {
        throw ValidationFailed("document declares n = " + std::to_string(doc.n) + " but the samples have rank " +
                               std::to_string(r.family.n));
    }
    r.report = validate_class(r.family, r.ops, cls, opts.tol, opts.continuity_bound);
    r.validated = r.report.ok;
    if (!r.report.ok && !opts.force) {
        std::string msg = "validation failed";
        for (const auto& v : r.report.violations) msg += "; " + v;
        throw ValidationFailed(msg);
    }
    return r;
}

FamilyDocument export_family(const ProjectionFamily& family, const SymmetryOps& ops, ClassLabel label,
                             std::map<std::string, std::string> provenance) {
    FamilyDocument doc;
    doc.class_name = to_string(label);
    doc.d = family.d;
    doc.n = family.n;
    doc.N = family.N;
    doc.g = family.d == 0 ? 0 : family.g();
    doc.ops = ops;
    doc.samples = family.P;
    doc.provenance = std::move(provenance);
    return doc;
}

HomotopyDocument parse_homotopy_document(const std::string& text) {
    const json j = parse_json(text);
    if (!j.is_object()) throw IoError("document must be an object");
    check_version(j, "tenfold-homotopy");
    HomotopyDocument doc;
    Homotopy& h = doc.homotopy;
    try {
        h.label = parse_class_label(field<std::string>(j, "class"));
    } catch (const IoError&) {
        throw;
    } catch (const std::exception&) {
        throw IoError("unknown class");
    }
    h.d = field<int>(j, "d");
    h.n = field<int>(j, "n");
    h.N = field<int>(j, "N");
    h.s = field<std::vector<double>>(j, "s");
    h.k = field<std::vector<double>>(j, "k");
    h.cure_winding = j.value("cure_winding", 0);
    if (h.N < 1 || h.s.size() < 2 || h.k.empty()) throw IoError("inconsistent homotopy dimensions");
    const json& P = j.at("P");
    if (!P.is_array() || P.size() != h.s.size()) throw IoError("P must have one row per s sample");
    for (std::size_t i = 0; i < P.size(); ++i) {
        h.P.push_back(matrices_from_json(P[i], h.N, "P[" + std::to_string(i) + "]"));
        if (h.P.back().size() != h.k.size()) throw IoError("P rows must have one sample per k");
    }
    if (j.contains("fill")) {
        const json& f = j.at("fill");
        h.fill.converged = f.value("converged", false);
        h.fill.iterations = f.value("iterations", 0);
        h.fill.refinements = f.value("refinements", 0);
        h.fill.method = f.value("method", std::string());
        if (f.contains("min_gap") && f.at("min_gap").is_number()) h.fill.min_gap = f.at("min_gap").get<double>();
    }
    doc.ops = ops_from_json(j.contains("ops") ? j.at("ops") : json::object(), h.N);
    if (j.contains("provenance")) doc.provenance = provenance_from_json(j.at("provenance"));
    return doc;
}

std::string dump_homotopy_document(const HomotopyDocument& doc) {
    const Homotopy& h = doc.homotopy;
    json j;
    j["format"] = "tenfold-homotopy";
    j["format_version"] = doc.format_version;
    j["class"] = to_string(h.label);
    j["d"] = h.d;
    j["n"] = h.n;
    j["N"] = h.N;
    j["s"] = h.s;
    j["k"] = h.k;
    j["cure_winding"] = h.cure_winding;
    json fill{{"converged", h.fill.converged},
              {"iterations", h.fill.iterations},
              {"refinements", h.fill.refinements},
              {"method", h.fill.method}};
    if (std::isfinite(h.fill.min_gap)) fill["min_gap"] = h.fill.min_gap;
    j["fill"] = std::move(fill);
    json P = json::array();
    for (const auto& row : h.P) P.push_back(matrices_to_json(row));
    j["P"] = std::move(P);
    j["ops"] = ops_to_json(doc.ops);
    j["provenance"] = provenance_to_json(doc.provenance);
    return j.dump() + "\n";
}

HomotopyDocument read_homotopy_document(const std::string& path) { return parse_homotopy_document(read_text(path)); }

void write_homotopy_document(const std::string& path, const HomotopyDocument& doc) {
    write_text(path, dump_homotopy_document(doc));
}

std::string index_record(const ClassIndex& idx) {
    json j;
    j["class"] = to_string(idx.label);
    j["d"] = idx.d;
    j["group"] = to_string(idx.group);
    j["weak"] = idx.weak ? json(*idx.weak) : json(nullptr);
    if (idx.strong) {
        j["strong"] = *idx.strong;
    } else if (idx.value.size() == 1) {
        j["strong"] = idx.value.front();
    } else {
        j["strong"] = nullptr;
    }
    j["value"] = idx.value;
    return j.dump();
}

}  // namespace tenfold
