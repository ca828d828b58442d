#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tenfold/homotopy.hpp"
#include "tenfold/symmetry.hpp"

namespace tenfold {

inline constexpr int kFormatVersion = 1;

/// On-disk description of a family: projection samples, or Bloch Hamiltonians and a Fermi level.
struct FamilyDocument {
    int format_version = kFormatVersion;
    std::string class_name;
    int d = 0;
    int n = 0;
    int N = 0;
    int g = 0;  // d = 1: 2g+1 samples over [-1/2, 1/2]; d = 0: one sample
    SymmetryOps ops;
    std::vector<CMatrix> samples;
    std::vector<CMatrix> hamiltonians;
    std::optional<double> fermi_level;
    std::map<std::string, std::string> provenance;
};

FamilyDocument parse_family_document(const std::string& text);
std::string dump_family_document(const FamilyDocument& doc);
FamilyDocument read_family_document(const std::string& path);
void write_family_document(const std::string& path, const FamilyDocument& doc);

struct IngestOptions {
    Tolerance tol;
    bool repair = false;
    bool force = false;
    double repair_margin = 0.1;
    double continuity_bound = kContinuityBound;
};

struct IngestResult {
    ProjectionFamily family;
    SymmetryOps ops;
    ClassLabel label = ClassLabel::A;
    ValidationReport report;
    bool validated = false;
    std::vector<std::string> log;  // repair actions
};

/// Builds and validates the family; throws ValidationFailed unless opts.force.
IngestResult ingest(const FamilyDocument& doc, const IngestOptions& opts = {});

FamilyDocument export_family(const ProjectionFamily& family, const SymmetryOps& ops, ClassLabel label,
                             std::map<std::string, std::string> provenance = {});

struct HomotopyDocument {
    int format_version = kFormatVersion;
    Homotopy homotopy;
    SymmetryOps ops;
    std::map<std::string, std::string> provenance;
};

HomotopyDocument parse_homotopy_document(const std::string& text);
std::string dump_homotopy_document(const HomotopyDocument& doc);
HomotopyDocument read_homotopy_document(const std::string& path);
void write_homotopy_document(const std::string& path, const HomotopyDocument& doc);

/// Single-line record with fields class, d, weak, strong, value.
std::string index_record(const ClassIndex& idx);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace tenfold
