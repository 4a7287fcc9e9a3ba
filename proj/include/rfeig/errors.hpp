#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rfeig {

// Base class for every failure the library reports. Callers that do not care
// about the specific condition can catch this type alone.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct AllZeroInput : Error {
    AllZeroInput() : Error("orthonormalize: every input column is numerically zero") {}
};

struct ConvergenceFailure : Error {
    explicit ConvergenceFailure(const std::string& what) : Error(what) {}
};

struct SingularMatrix : Error {
    std::size_t pivot_index;
    explicit SingularMatrix(std::size_t k)
        : Error("dense solve: zero pivot at index " + std::to_string(k)), pivot_index(k) {}
};

struct StructurallySingular : Error {
    std::size_t column;
    explicit StructurallySingular(std::size_t j)
        : Error("sparse LU: structurally empty column " + std::to_string(j)), column(j) {}
};

struct NumericallySingular : Error {
    std::size_t pivot_index;
    explicit NumericallySingular(std::size_t k)
        : Error("sparse LU: no usable pivot in column " + std::to_string(k)), pivot_index(k) {}
};

struct ParseError : Error {
    std::size_t line;
    ParseError(std::size_t line_number, const std::string& what)
        : Error("line " + std::to_string(line_number) + ": " + what), line(line_number) {}
};

struct UnsupportedFormat : Error {
    explicit UnsupportedFormat(const std::string& what) : Error(what) {}
};

struct InvalidOrder : Error {
    explicit InvalidOrder(const std::string& what) : Error(what) {}
};

struct PoleHit : Error {
    PoleHit() : Error("filter evaluated too close to a quadrature pole") {}
};

struct TooManyParts : Error {
    TooManyParts() : Error("requested more partitions than graph vertices") {}
};

struct PoleOnSpectrum : Error {
    std::size_t pole;
    explicit PoleOnSpectrum(std::size_t j)
        : Error("quadrature pole " + std::to_string(j) + " lies on the pencil spectrum"), pole(j) {}
};

struct PoleOnBlockSpectrum : Error {
    std::size_t pole;
    std::size_t block;
    PoleOnBlockSpectrum(std::size_t j, std::size_t b)
        : Error("quadrature pole " + std::to_string(j) + " lies on the spectrum of interior block " +
                std::to_string(b)),
          pole(j), block(b) {}
};

struct InterfaceTooLarge : Error {
    std::size_t interface_size;
    std::size_t cap;
    InterfaceTooLarge(std::size_t s, std::size_t c)
        : Error("interface dimension " + std::to_string(s) + " exceeds dense Schur cap " +
                std::to_string(c)),
          interface_size(s), cap(c) {}
};

struct EmptyBasis : Error {
    EmptyBasis() : Error("projection basis has no columns") {}
};

struct IllConditionedProjection : Error {
    double condition;
    explicit IllConditionedProjection(double cond)
        : Error("projected Gram matrix condition " + std::to_string(cond) +
                " exceeds 1e14; basis contains a null direction of A - zc*M"),
          condition(cond) {}
};

struct SingularMassBlock : Error {
    std::size_t block;
    explicit SingularMassBlock(std::size_t b)
        : Error("mass matrix block " + std::to_string(b) + " is singular"), block(b) {}
};

struct BlockTooLarge : Error {
    std::size_t block;
    std::size_t size;
    BlockTooLarge(std::size_t b, std::size_t d)
        : Error("interior block " + std::to_string(b) + " of size " + std::to_string(d) +
                " exceeds the dense eigendecomposition cap"),
          block(b), size(d) {}
};

}  // namespace rfeig
