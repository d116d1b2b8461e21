#pragma once

// Scoop-by-scoop simulation of the two stuffs and feasibility classification.
//
// Each scoop delivers one volume unit of the dissolved stuff and the fraction
// (1 - q) q^{i-1} of the initial surface stuff (normalized to 1). The surface
// imbalance after k scoops is therefore ((1 - q) / q) times the power sum
// s_1 q + ... + s_k q^k.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "soupdiv/approx.hpp"
#include "soupdiv/signs.hpp"

namespace soupdiv {

struct SimulationRow {
  std::size_t i = 0;
  Sign sign = kPlus;
  double stuff1_delivered = 1.0;
  double stuff2_delivered = 0.0;
  double stuff1_plus = 0.0;  // cumulative per plate
  double stuff1_minus = 0.0;
  double stuff2_plus = 0.0;
  double stuff2_minus = 0.0;
  int imbalance1 = 0;
  double imbalance2 = 0.0;
};

struct SimulationTrace {
  double q = 0.0;
  std::vector<SimulationRow> rows;

  /// Surface stuff still in the bowl after the last row, q^k.
  double remaining_surface() const;
};

/// Throws std::invalid_argument when steps is 0 or exceeds signs.size().
SimulationTrace simulate(double q, const SignSeq& signs, std::size_t steps);

/// Maps a scoop count k to the bound on |imbalance2| at k, if one applies.
using Envelope = std::function<std::optional<double>(std::size_t)>;

enum class Verdict { kBoundedFairObserved, kDiverging, kInconclusive };

std::string to_string(Verdict v);

struct FairnessCriteria {
  Envelope envelope;  // empty: no theoretical bound supplied
  int imbalance1_cap = 2;
  double tolerance = 1e-12;
};

struct FairnessReport {
  int max_abs_imbalance1 = 0;
  double final_imbalance2 = 0.0;
  double max_abs_imbalance2 = 0.0;
  std::vector<std::pair<std::size_t, double>> imbalance2_envelope;
  std::optional<std::size_t> first_envelope_violation;
  Verdict verdict = Verdict::kInconclusive;
};

/// Observational verdict over a finite trace: a cap breach or an envelope
/// breach is Diverging, a satisfied envelope is BoundedFairObserved, and
/// no envelope at all is Inconclusive.
FairnessReport fairness_report(const SimulationTrace& trace, const FairnessCriteria& criteria = {});

/// Pairwise greedy bound at even k, in stuff-2 units.
Envelope greedy_envelope(double q);
/// A q^{k_m} at each block end, in stuff-2 units.
Envelope certificate_envelope(const FairDivisionPlan& plan);
/// `bound` at every multiple of `period`.
Envelope periodic_envelope(std::size_t period, double bound);

enum class FeasibilityKind {
  kInfeasible,
  kBoundedFairGreedy,
  kBoundedFairCertificate,
  kPeriodicFair,
  kUnknown,
};

std::string to_string(FeasibilityKind kind);

struct FeasibilityClass {
  FeasibilityKind kind = FeasibilityKind::kUnknown;
  double q = 0.0;
  std::optional<double> gap;               // Infeasible: q - sum_{i>=2} q^i
  std::optional<Certificate> certificate;  // BoundedFairCertificate
  std::optional<PMPattern> pattern;        // PeriodicFair
  std::optional<double> root;              // PeriodicFair
};

/// Threshold classifier: q <= 1/2 infeasible, q >= 1/sqrt 2 greedy,
/// q above q_inf certified; otherwise balanced patterns up to search_degree
/// are checked for a root within 1e-9 of q.
FeasibilityClass classify(double q, int search_degree = 12);

}  // namespace soupdiv
