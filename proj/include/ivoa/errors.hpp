#pragma once

#include <stdexcept>
#include <string>

namespace ivoa {

// Root of the project error hierarchy. Every domain error below is a distinct
// type so callers (and the CLI exit-code mapping) can discriminate precisely.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- q-series ---
struct OffsetMismatch : Error { using Error::Error; };               // offsets differ by a non-integer
struct NonUnitLeadingCoefficient : Error { using Error::Error; };    // rational power needs c0 = 1
struct ZeroSeries : Error { using Error::Error; };                   // operation undefined on 0
struct UnsupportedWeight : Error { using Error::Error; };            // Eisenstein weight not in {2,4}
struct InsufficientOrder : Error { using Error::Error; };            // comparison past the valid window

// --- lattice ---
struct UnknownLattice : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };

// --- characters / oracle ---
struct DomainViolation : Error { using Error::Error; };              // charge outside its constraint
struct UnknownTag : Error { using Error::Error; };
struct ScaleExceeded : Error { using Error::Error; };                // enumeration budget exhausted

// --- modular ---
struct InsufficientPrecision : Error { using Error::Error; };        // numeric tail bound above tol
struct NoAdmissibleMonomials : Error { using Error::Error; };
struct InconsistentSystem : Error { using Error::Error; };
struct PoleAtInput : Error { using Error::Error; };
struct NonSquareDiscriminant : Error { using Error::Error; };

}  // namespace ivoa
