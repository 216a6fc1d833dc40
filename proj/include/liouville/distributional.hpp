#pragma once

// Patch connections built from step functions and the curvature they carry,
// kept as exact coefficients of step products and delta functions rather
// than smeared numerically. Steps use theta(0) = 0.

#include <array>
#include <string>
#include <vector>

#include "liouville/gauge_field.hpp"

namespace liouville {

/// Step-function basis relative to a centre c.
enum class Step {
    both,     // theta(x - c) + theta(c - x)
    left,     // theta(c - x)
    right,    // theta(x - c)
    product,  // theta(x - c) theta(c - x)
};

double step_value(Step s, double x, double c);

/// sum_s smooth[s] * step_s(x) + delta_right * delta(x - c) + delta_left * delta(c - x)
struct DistributionalExpr {
    double center = 0.0;
    std::array<LieElement, 4> smooth{};
    LieElement delta_right;  // delta(x - c)
    LieElement delta_left;   // delta(c - x)

    LieElement& operator[](Step s) { return smooth[static_cast<int>(s)]; }
    const LieElement& operator[](Step s) const { return smooth[static_cast<int>(s)]; }

    /// The regular part at x.
    LieElement smooth_at(double x) const;

    /// Coefficient of the point mass at x = c; delta is even so both forms merge.
    LieElement delta_at_center() const { return delta_right + delta_left; }
};

/// Field data the patch connections are evaluated with: the field of the
/// patch at x, and both fields at the defect.
struct PatchJets {
    FieldJet own;     // phi_p at the evaluation point
    FieldJet defect1; // phi1 at x = 0
    FieldJet defect2; // phi2 at x = 0
};

/// One component of a patch connection: a LieJet per step basis element.
struct StepField {
    double center = 0.0;
    std::array<LieJet, 4> terms{};

    LieJet& operator[](Step s) { return terms[static_cast<int>(s)]; }
    const LieJet& operator[](Step s) const { return terms[static_cast<int>(s)]; }
};

/// Patch 1 (x < b):  A_t^ = [theta(x-a) + theta(a-x)] A1_t - (1/2) theta(x-a) D1 h,  A_x^ = theta(a-x) A1_x.
/// Patch 2 (x > a):  A_t^ = [theta(x-b) + theta(b-x)] A2_t - (1/2) theta(b-x) D2 h,  A_x^ = theta(x-b) A2_x.
class HattedConnection {
public:
    /// Throws PreconditionError unless a < 0 < b and patch is 1 or 2.
    HattedConnection(int patch, double a, double b, const BorderFunction& border);

    int patch() const { return patch_; }
    double center() const { return patch_ == 1 ? a_ : b_; }
    bool contains(double x) const { return patch_ == 1 ? x < b_ : x > a_; }

    /// Step-resolved components at x. Throws DomainError outside the patch.
    std::pair<StepField, StepField> components(double x, const PatchJets& jets) const;

    /// (A_t^, A_x^) at x with theta(0) = 0.
    BulkConnection value(double x, const PatchJets& jets) const;

    /// d_t A_x^ - d_x A_t^ + [A_t^, A_x^] as a distribution at x.
    DistributionalExpr curvature(double x, const PatchJets& jets) const;

private:
    int patch_;
    double a_, b_;
    BorderFunction border_;
};

/// Three consecutive states (t - dt, t, t + dt); phi_tt comes from pi differences.
struct StateWindow {
    const FieldState& prev;
    const FieldState& cur;
    const FieldState& next;
};

/// Jets of phi1 at grid point j (interior) and of both fields at x = 0.
FieldJet jet1(const StateWindow& w, std::size_t j);
FieldJet jet2(const StateWindow& w, std::size_t j);
FieldJet defect_jet1(const StateWindow& w);
FieldJet defect_jet2(const StateWindow& w);

struct RegionEntry {
    std::string region;      // "x<a", "x=a", "a<x<b", "x=b", "x>b"
    std::size_t samples = 0;
    double smooth_norm = 0.0;  // max over samples of the regular part
    LieElement smooth_sample;  // regular part at the sample achieving smooth_norm
    LieElement delta;          // point-mass coefficient (x = a or x = b only)
};

struct RegionReport {
    int patch = 1;
    double a = 0.0, b = 0.0;
    std::vector<RegionEntry> regions;

    const RegionEntry& at(const std::string& name) const;
};

enum class OverlapMode {
    live,      // defect-point jets as simulated
    injected,  // x-derivatives forced to zero on a < x < b
};

/// Region-by-region curvature of one patch. The bulk region uses every
/// interior grid point on that side; x = a, x = b and the overlap use the
/// defect-point jets (the a, b -> 0 limit).
RegionReport distributional_curvature(int patch, const StateWindow& w, double a, double b,
                                      const BorderFunction& border, OverlapMode mode = OverlapMode::live);

}  // namespace liouville
