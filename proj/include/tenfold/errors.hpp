#pragma once

#include <stdexcept>
#include <string>

namespace tenfold {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class StructureError : public Error {
public:
    StructureError(const std::string& what, double residual = 0.0)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class BranchCutError : public Error {
public:
    BranchCutError(const std::string& what, double phase)
        : Error(what), phase_(phase) {}
    double phase() const { return phase_; }

private:
    double phase_;
};

class GridError : public Error {
public:
    using Error::Error;
};

class NotConnected : public Error {
public:
    NotConnected(const std::string& what, std::string index0, std::string index1)
        : Error(what), index0_(std::move(index0)), index1_(std::move(index1)) {}
    const std::string& index0() const { return index0_; }
    const std::string& index1() const { return index1_; }

private:
    std::string index0_;
    std::string index1_;
};

class FillFailed : public Error {
public:
    FillFailed(const std::string& what, double min_gap)
        : Error(what), min_gap_(min_gap) {}
    double min_gap() const { return min_gap_; }

private:
    double min_gap_;
};

class WindingObstruction : public Error {
public:
    explicit WindingObstruction(int w)
        : Error("boundary winding " + std::to_string(w) + " is nonzero"), w_(w) {}
    int winding() const { return w_; }

private:
    int w_;
};

class GapClosed : public Error {
public:
    GapClosed(const std::string& what, double k, double gap)
        : Error(what), k_(k), gap_(gap) {}
    double k() const { return k_; }
    double gap() const { return gap_; }

private:
    double k_;
    double gap_;
};

class ValidationFailed : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace tenfold
