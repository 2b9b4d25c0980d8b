#pragma once
#include <stdexcept>
#include <string>

namespace choreo {

// Base for all engine errors. `kind()` is a stable machine-readable tag used by
// the CLI to pick exit codes and by the report writer.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }
private:
    std::string kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error("config_error", m) {}
};

struct AlgebraError : Error {
    using Error::Error;  // kinds: degenerate_line, not_a_root, unpaired_point, solver_stall
};

struct TopologyError : Error {
    using Error::Error;  // kinds: singular_curve, seed_miss, off_curve, ambiguous, not_interior, covering_degree, no_oval
};

struct FamilyError : Error {
    using Error::Error;  // kinds: not_closed, too_coarse, not_on_curve, bad_family
};

// Tracker failures. `t` is the loop parameter at which the failure occurred.
struct TrackerError : Error {
    TrackerError(std::string kind, const std::string& m, double t_at)
        : Error(std::move(kind), m), t(t_at) {}
    double t;
};

struct DiscriminantHit : TrackerError {
    DiscriminantHit(const std::string& m, double t_at)
        : TrackerError("discriminant_hit", m, t_at) {}
};

struct CorrectorDiverged : TrackerError {
    CorrectorDiverged(const std::string& m, double t_at)
        : TrackerError("corrector_diverged", m, t_at) {}
};

struct MatchAmbiguity : TrackerError {
    MatchAmbiguity(const std::string& m, double t_at)
        : TrackerError("match_ambiguity", m, t_at) {}
};

struct ChoreographyError : Error {
    using Error::Error;  // kinds: non_integer_winding, match_failure, endpoint_mismatch, unoccupied_nonzero, not_cubic
};

} // namespace choreo
