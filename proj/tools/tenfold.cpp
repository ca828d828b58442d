#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tenfold/factorizations.hpp"
#include "tenfold/homotopy.hpp"
#include "tenfold/indices.hpp"
#include "tenfold/io.hpp"
#include "tenfold/models.hpp"

using namespace tenfold;
using nlohmann::json;

namespace {

enum Exit { ok = 0, usage = 1, validation = 2, not_connected = 3, fill_failed = 4, io = 5 };

struct Globals {
    double atol = 1e-10;
    double gap_min = 1e-6;
    int grid = 128;
    std::uint64_t seed = 0;
    int s_grid = 65;

    Tolerance tol() const { return {atol, gap_min}; }
    HomotopyOptions homotopy() const {
        HomotopyOptions h;
        h.tol = tol();
        h.seed = seed;
        h.s_points = s_grid;
        return h;
    }
};

std::string slurp(const std::string& path) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
    return read_text(path);
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text(path, text);
    }
}

IngestResult load_family(const std::string& path, const Globals& g, bool repair, bool force) {
    IngestOptions o;
    o.tol = g.tol();
    o.repair = repair;
    o.force = force;
    IngestResult r = ingest(parse_family_document(slurp(path)), o);
    for (const auto& line : r.log) std::cerr << line << "\n";
    return r;
}

json matrix_json(const CMatrix& M) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json a = json::array();
        json b = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            a.push_back(M(i, j).real());
            b.push_back(M(i, j).imag());
        }
        re.push_back(a);
        im.push_back(b);
    }
    return {{"re", re}, {"im", im}};
}

CMatrix matrix_from(const json& j) {
    const json& re = j.at("re");
    const json& im = j.at("im");
    const auto rows = static_cast<Eigen::Index>(re.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(re.at(0).size());
    CMatrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(re.at(i).size()) != cols || static_cast<Eigen::Index>(im.at(i).size()) != cols)
            throw IoError("matrix rows have unequal length");
        for (Eigen::Index c = 0; c < cols; ++c) M(i, c) = cplx(re.at(i).at(c).get<double>(), im.at(i).at(c).get<double>());
    }
    return M;
}

CMatrix read_matrix_document(const std::string& path) {
    json j;
    try {
        j = json::parse(slurp(path));
        if (j.at("format").get<std::string>() != "tenfold-matrix") throw IoError("expected a tenfold-matrix document");
        return matrix_from(j.at("matrix"));
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed matrix document: ") + e.what());
    }
}

CMatrix block_J2(const RVector& D) {
    const Eigen::Index m = D.size();
    CMatrix B = CMatrix::Zero(2 * m, 2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        B(2 * i, 2 * i + 1) = D(i);
        B(2 * i + 1, 2 * i) = -D(i);
    }
    return B;
}

int run_factor(const std::string& in, const std::string& kind, const std::string& form, const std::string& out,
               const Globals& g) {
    const CMatrix A = read_matrix_document(in);
    const Tolerance tol = g.tol();
    json factors = json::object();
    json values = json::object();
    double err = 0.0;
    const Eigen::Index n = A.rows();
    if (kind == "takagi") {
        const TakagiResult t = takagi(A, false, tol);
        factors["U"] = matrix_json(t.U);
        values["lambda"] = std::vector<double>(t.lambda.data(), t.lambda.data() + t.lambda.size());
        err = max_abs(t.U * t.lambda.cast<cplx>().asDiagonal() * t.U.transpose() - A);
    } else if (kind == "takagi-symplectic") {
        const TakagiResult t = takagi(A, true, tol);
        factors["U"] = matrix_json(t.U);
        values["lambda"] = std::vector<double>(t.lambda.data(), t.lambda.data() + t.lambda.size());
        err = max_abs(t.U * t.lambda.cast<cplx>().asDiagonal() * t.U.transpose() - A);
    } else if (kind == "hua") {
        const HuaResult h = hua(A, tol);
        factors["U"] = matrix_json(h.U);
        values["D"] = std::vector<double>(h.D.data(), h.D.data() + h.D.size());
        err = max_abs(h.U * block_J2(h.D) * h.U.transpose() - A);
    } else if (kind == "unitary-symmetric" || kind == "symplectic-symmetric") {
        const CMatrix V = kind == "unitary-symmetric" ? factor_unitary_symmetric(A, tol) : factor_symplectic_symmetric(A, tol);
        factors["V"] = matrix_json(V);
        err = max_abs(V.transpose() * V - A);
    } else if (kind == "signature") {
        const SignatureResult s = factor_signature(A, tol);
        CVector d = -CVector::Ones(n);
        d.head(s.j).setOnes();
        const CMatrix V = s.V.cast<cplx>();
        factors["V"] = matrix_json(V);
        values["j"] = s.j;
        err = max_abs(V.transpose() * d.asDiagonal() * V - A);
    } else if (kind == "skew-unitary") {
        const CMatrix V = factor_skew_unitary(A, tol);
        factors["V"] = matrix_json(V);
        err = max_abs(V.transpose() * symplectic_J(static_cast<int>(n)) * V - A);
    } else if (kind == "skew-orthogonal") {
        const SkewForm f = form == "pfaffian" ? SkewForm::pfaffian_form : SkewForm::J_form;
        const SkewOrthogonalResult s = factor_skew_orthogonal(A, f, tol);
        factors["V"] = matrix_json(s.V.cast<cplx>());
        factors["Lambda"] = matrix_json(s.Lambda.cast<cplx>());
        values["pf"] = s.pf;
        err = max_abs(s.V.cast<cplx>().transpose() * s.Lambda.cast<cplx>() * s.V.cast<cplx>() - A);
    } else {
        std::cerr << "unknown --kind '" << kind << "'\n";
        return usage;
    }
    json doc{{"format", "tenfold-factors"},
             {"format_version", kFormatVersion},
             {"kind", kind},
             {"factors", factors},
             {"values", values},
             {"reconstruction_error", err}};
    if (!out.empty()) write_text(out, doc.dump(1) + "\n");
    std::cout << "reconstruction error " << std::scientific << std::setprecision(3) << err << "\n";
    return ok;
}

void print_report(const ValidationReport& r) {
    std::cout << std::left << std::setw(14) << "check" << "residual\n";
    for (const auto& [name, value] : r.residuals) {
        std::cout << std::left << std::setw(14) << name << std::scientific << std::setprecision(3) << value << "\n";
    }
    for (const auto& v : r.violations) std::cout << "violation: " << v << "\n";
    std::cout << (r.ok ? "ok" : "FAILED") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tenfold-way classification of gapped projection families"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--atol", g.atol, "Absolute tolerance")->check(CLI::PositiveNumber);
    app.add_option("--gap-min", g.gap_min, "Minimum spectral gap")->check(CLI::PositiveNumber);
    app.add_option("--grid", g.grid, "Grid parameter g (2g+1 samples)")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--s-grid", g.s_grid, "Samples along the homotopy parameter")->check(CLI::Range(3, 1 << 16));

    bool repair = false;
    bool force = false;
    std::string file;
    auto* validate = app.add_subcommand("validate", "Validate a family document");
    validate->add_option("file", file, "Family document ('-' for stdin)")->required();
    validate->add_flag("--repair", repair, "Round near-projections spectrally");

    std::vector<std::string> files;
    auto* idx = app.add_subcommand("index", "Print the index of each family");
    idx->add_option("files", files, "Family documents ('-' for stdin)");
    idx->add_flag("--repair", repair, "Round near-projections spectrally");
    idx->add_flag("--force", force, "Accept families failing validation");

    std::string fa;
    std::string fb;
    std::string out;
    auto* connect_cmd = app.add_subcommand("connect", "Construct a homotopy between two families");
    connect_cmd->add_option("a", fa, "First family")->required();
    connect_cmd->add_option("b", fb, "Second family")->required();
    connect_cmd->add_option("-o,--output", out, "Homotopy document")->required();

    std::string kind;
    std::string form = "J";
    auto* factor = app.add_subcommand("factor", "Factor a matrix document");
    factor->add_option("file", file, "Matrix document ('-' for stdin)")->required();
    factor->add_option("--kind", kind,
                       "takagi, takagi-symplectic, hua, unitary-symmetric, symplectic-symmetric, signature, "
                       "skew-unitary, skew-orthogonal")
        ->required();
    factor->add_option("--form", form, "skew-orthogonal normal form: J or pfaffian");
    factor->add_option("-o,--output", out, "Factors document");

    std::string model;
    std::string cls_name;
    std::map<std::string, double> params;
    auto* gen = app.add_subcommand("generate", "Generate a model family");
    gen->add_option("--model", model, "kitaev-chain, ssh or random-class")->required();
    for (const char* p : {"t", "delta", "mu", "t1", "t2", "n", "N", "d", "ops_seed"}) {
        gen->add_option_function<double>(std::string("--") + p, [&params, p](const double& v) { params[p] = v; },
                                         std::string("Model parameter ") + p);
    }
    gen->add_option("--class", cls_name, "Class for random-class");
    gen->add_option("-o,--output", out, "Family document (default stdout)");

    bool quiet = false;
    auto* verify = app.add_subcommand("verify-homotopy", "Check a homotopy document");
    verify->add_option("file", file, "Homotopy document")->required();
    verify->add_flag("--quiet", quiet, "Only print the verdict");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*validate) {
            const IngestResult r = load_family(file, g, repair, true);
            std::cout << "class " << to_string(r.label) << " d=" << r.family.d << " n=" << r.family.n
                      << " N=" << r.family.N << "\n";
            print_report(r.report);
            return r.report.ok ? ok : validation;
        }
        if (*idx) {
            if (files.empty()) files.push_back("-");
            for (const auto& f : files) {
                const IngestResult r = load_family(f, g, repair, force);
                std::cout << index_record(index(r.family, r.ops, cartan_class(r.label), g.tol())) << "\n";
            }
            return ok;
        }
        if (*connect_cmd) {
            const IngestResult a = load_family(fa, g, false, false);
            const IngestResult b = load_family(fb, g, false, false);
            if (a.label != b.label) {
                std::cerr << "families belong to different classes\n";
                return validation;
            }
            const CartanClass& cls = cartan_class(a.label);
            const double dops = [&] {
                double m = 0.0;
                if (a.ops.T && b.ops.T) m = std::max(m, max_abs(*a.ops.T - *b.ops.T));
                if (a.ops.C && b.ops.C) m = std::max(m, max_abs(*a.ops.C - *b.ops.C));
                if (a.ops.S && b.ops.S) m = std::max(m, max_abs(*a.ops.S - *b.ops.S));
                return m;
            }();
            if (dops > 1e-8) {
                std::cerr << "families carry different symmetry operators\n";
                return validation;
            }
            const HomotopyOptions ho = g.homotopy();
            HomotopyDocument doc;
            doc.homotopy = connect(a.family, b.family, a.ops, cls, ho);
            doc.ops = a.ops;
            doc.provenance["a"] = fa;
            doc.provenance["b"] = fb;
            const HomotopyReport rep = verify_homotopy(doc.homotopy, a.ops, cls, &a.family, &b.family, ho);
            write_homotopy_document(out, doc);
            std::cout << "method " << doc.homotopy.fill.method << ", " << doc.homotopy.s.size() << " slices, "
                      << (rep.ok ? "verified" : "verification FAILED") << "\n";
            return rep.ok ? ok : fill_failed;
        }
        if (*factor) return run_factor(file, kind, form, out, g);
        if (*gen) {
            ModelSpec spec;
            spec.name = model;
            spec.params = params;
            spec.class_name = cls_name;
            spec.g = g.grid;
            spec.seed = g.seed;
            const ModelFamily m = generate(spec, g.tol());
            std::map<std::string, std::string> prov{{"model", model}, {"seed", std::to_string(g.seed)}};
            for (const auto& [k, v] : params) {
                std::ostringstream os;
                os << std::setprecision(17) << v;
                prov[k] = os.str();
            }
            if (!cls_name.empty()) prov["class"] = cls_name;
            emit(out, dump_family_document(export_family(m.family, m.ops, m.label, prov)));
            return ok;
        }
        if (*verify) {
            const HomotopyDocument doc = read_homotopy_document(file);
            HomotopyOptions ho = g.homotopy();
            const HomotopyReport rep = verify_homotopy(doc.homotopy, doc.ops, cartan_class(doc.homotopy.label), nullptr,
                                                       nullptr, ho);
            if (!quiet) {
                std::cout << std::scientific << std::setprecision(3) << "max step k " << rep.max_step_k << "\n"
                          << "max step s " << rep.max_step_s << "\n"
                          << "failed slices " << rep.failed_slices << "\n";
                for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
            }
            std::cout << (rep.ok ? "clean" : "FAILED") << "\n";
            return rep.ok ? ok : validation;
        }
    } catch (const NotConnected& e) {
        std::cerr << "not connected: " << e.what() << "\n  index A: " << e.index0() << "\n  index B: " << e.index1()
                  << "\n";
        return not_connected;
    } catch (const FillFailed& e) {
        std::cerr << "fill failed: " << e.what() << "\n";
        return fill_failed;
    } catch (const WindingObstruction& e) {
        std::cerr << "fill failed: " << e.what() << "\n";
        return fill_failed;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return io;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const Error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return validation;
    }
    return usage;
}
