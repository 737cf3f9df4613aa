#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace poissonlab {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Expression language errors carry the offending source position.
struct SyntaxError : Error {
    std::size_t position;
    SyntaxError(std::size_t pos, const std::string& msg)
        : Error("syntax error at " + std::to_string(pos) + ": " + msg), position(pos) {}
};

struct UnknownSymbol : Error {
    std::string name;
    std::size_t position;
    UnknownSymbol(std::string sym, std::size_t pos)
        : Error("unknown symbol '" + sym + "' at " + std::to_string(pos)),
          name(std::move(sym)), position(pos) {}
};

// Pointwise evaluation left the domain of an elementary function
// (log/sqrt of a non-positive value, division by zero, abs at 0).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("domain error: " + msg) {}
};

struct SingularG : Error {
    explicit SingularG(const std::string& msg = "cometric is singular") : Error(msg) {}
};

struct MissingJ : Error {
    explicit MissingJ(const std::string& msg = "structure declares no J field") : Error(msg) {}
};

struct NotFStructure : Error {
    double defect;
    explicit NotFStructure(double d)
        : Error("canonical J is not an f-structure, |J^3+J| = " + std::to_string(d)), defect(d) {}
};

struct IndefiniteRestriction : Error {
    explicit IndefiniteRestriction(const std::string& msg = "leafwise metric restriction is not definite")
        : Error(msg) {}
};

struct DegeneratePi : Error {
    explicit DegeneratePi(const std::string& msg = "Poisson bivector is degenerate here") : Error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};

struct RankDrop : Error {
    std::vector<double> point;
    explicit RankDrop(std::vector<double> p)
        : Error("bivector rank differs from the base-point rank here"), point(std::move(p)) {}
};

struct NotLeafTangent : Error {
    double residual;
    explicit NotLeafTangent(double r)
        : Error("vector is not tangent to the leaf, projection residual " + std::to_string(r)),
          residual(r) {}
};

struct RankDeficient : Error {
    explicit RankDeficient(const std::string& msg = "submersion differential is rank deficient")
        : Error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

struct ValidationError : Error {
    std::string check;
    std::vector<double> point;
    double defect;
    ValidationError(std::string chk, std::vector<double> p, double d, const std::string& msg)
        : Error("validation failed [" + chk + "]: " + msg),
          check(std::move(chk)), point(std::move(p)), defect(d) {}
};

struct UnknownEntry : Error {
    explicit UnknownEntry(const std::string& id) : Error("unknown gallery entry '" + id + "'") {}
};

struct DegenerateCosymplectic : Error {
    explicit DegenerateCosymplectic(const std::string& msg) : Error(msg) {}
};

struct NotClosed : Error {
    explicit NotClosed(const std::string& msg) : Error(msg) {}
};

struct LeftValidityBox : Error {
    double time;
    explicit LeftValidityBox(double t)
        : Error("trace left the validity box at t = " + std::to_string(t)), time(t) {}
};

}  // namespace poissonlab
