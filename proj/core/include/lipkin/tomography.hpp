#pragma once

#include "lipkin/lmg_exact.hpp"
#include "lipkin/qubit_sim.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lipkin::tomo {

enum class Axis { X, Y, Z };

char axis_char(Axis a);
Axis axis_from_char(char c);

/// Tensor product of single-qubit Paulis; identity on unlisted qubits.
struct PauliString {
    std::map<int, Axis> ops;

    void validate(int n_qubits) const;  // non-empty, indices in range
    std::string str(int n_qubits) const;

    static PauliString z(int q) { return {{{q, Axis::Z}}}; }
    static PauliString zz(int p, int q) { return {{{p, Axis::Z}, {q, Axis::Z}}}; }
    static PauliString xx(int p, int q) { return {{{p, Axis::X}, {q, Axis::X}}}; }
    static PauliString yy(int p, int q) { return {{{p, Axis::Y}, {q, Axis::Y}}}; }

    auto operator<=>(const PauliString&) const = default;
};

/// Gates rotating the given measurement axis onto Z, appended immediately
/// before measurement: Z -> none, X -> H, Y -> S-dagger then H.
std::vector<sim::Gate> basis_rotation_gates(Axis axis, int qubit);

using BasisSetting = std::vector<Axis>;  // one axis per qubit

/// Commuting same-basis measurement groups covering the required strings.
struct TomographyPlan {
    std::vector<BasisSetting> groups;
    std::int64_t shots_per_group = 1 << 14;
    int repetitions = 5;

    bool covers(const BasisSetting& setting, const PauliString& s) const;
    /// Groups (by index) that can read the string.
    std::vector<std::size_t> covering_groups(const PauliString& s) const;
};

/// All-Z, all-X, all-Y settings: sufficient for the Z, ZZ, XX and YY
/// strings the LMG order parameters need.
TomographyPlan default_plan(int n_qubits, std::int64_t shots_per_group, int repetitions);

/// One measured histogram: basis setting, shot count, RNG seed, counts.
struct GroupCounts {
    BasisSetting setting;
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
    std::map<std::string, std::int64_t> counts;
};

struct EstimatedValue {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t shots = 0;
};

struct UncoveredStringError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pooled mean and standard error of a Pauli string over every covering
/// group histogram (sample std over the +-1 outcomes divided by sqrt(shots)).
EstimatedValue estimate_pauli(const std::vector<GroupCounts>& counts, const TomographyPlan& plan,
                              const PauliString& s);

using PauliExpectations = std::map<PauliString, EstimatedValue>;

/// Exact operator averages for every plan-covered Z/ZZ/XX/YY string.
PauliExpectations exact_expectations(const sim::QuantumState& state);

/// Sampled expectations for the standard strings, from group histograms.
PauliExpectations estimate_expectations(const std::vector<GroupCounts>& counts,
                                        const TomographyPlan& plan, int n_qubits);

struct RdmElements {
    std::vector<EstimatedValue> one_rdm_diag;              // <sigma_z p>, per qubit
    std::map<std::pair<int, int>, EstimatedValue> two_rdm; // <xx> - <yy>, p < q
};

/// 1-RDM diagonal and 2-RDM pair elements from Z, XX, YY expectations,
/// errors propagated in quadrature.
RdmElements rdm_elements(const PauliExpectations& expectations, int n_qubits);

/// Energy = (eps/2) sum_p <sigma_z p> + (lambda/2) sum_{p<q} 2D_pq.
double energy_from_rdm(const RdmElements& elements, const lmg::LmgParams& params);

struct OrderParameterEstimate {
    lmg::RdmPoint point;
    double jz_err = 0.0;
    double jz2_err = 0.0;
    double jpm2_err = 0.0;
    std::vector<double> sigma_z;  // per qubit
};

/// Order parameters from per-string expectations with independent Gaussian
/// propagation: Jz = sum_p Z_p / 2, Jz2 = (n + sum_{p!=q} ZZ)/4,
/// Jpm2 = sum_{p<q} (XX - YY).
OrderParameterEstimate order_parameters_from_paulis(const PauliExpectations& expectations,
                                                    int n_qubits, const lmg::LmgParams& params,
                                                    lmg::Source source);

/// Same quantities straight from group histograms; within-group covariances
/// are exact because each order parameter is a per-shot statistic of one
/// histogram (groups stay independent).
OrderParameterEstimate order_parameters_from_counts(const std::vector<GroupCounts>& counts,
                                                    int n_qubits, const lmg::LmgParams& params,
                                                    lmg::Source source);

/// JSON-lines record for persisted raw counts.
std::string group_counts_to_jsonl(const GroupCounts& gc, std::size_t point_index,
                                  const lmg::LmgParams& params);
GroupCounts group_counts_from_jsonl(const std::string& line, std::size_t* point_index = nullptr);

}  // namespace lipkin::tomo
