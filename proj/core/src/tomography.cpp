#include "lipkin/tomography.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace lipkin::tomo {

using nlohmann::json;

char axis_char(Axis a) {
    switch (a) {
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return 'Z';
}

Axis axis_from_char(char c) {
    switch (c) {
        case 'X': case 'x': return Axis::X;
        case 'Y': case 'y': return Axis::Y;
        case 'Z': case 'z': return Axis::Z;
    }
    throw std::invalid_argument("axis_from_char: expected X, Y or Z");
}

void PauliString::validate(int n_qubits) const {
    if (ops.empty()) throw std::invalid_argument("PauliString: empty");
    for (const auto& [q, a] : ops) {
        (void)a;
        if (q < 0 || q >= n_qubits) throw std::out_of_range("PauliString: qubit out of range");
    }
}

std::string PauliString::str(int n_qubits) const {
    std::string s(n_qubits, 'I');
    for (const auto& [q, a] : ops) s[q] = axis_char(a);
    return s;
}

std::vector<sim::Gate> basis_rotation_gates(Axis axis, int qubit) {
    switch (axis) {
        case Axis::Z: return {};
        case Axis::X: return {sim::Gate::h(qubit)};
        case Axis::Y: return {sim::Gate::sdg(qubit), sim::Gate::h(qubit)};
    }
    return {};
}

bool TomographyPlan::covers(const BasisSetting& setting, const PauliString& s) const {
    for (const auto& [q, a] : s.ops) {
        if (q < 0 || static_cast<std::size_t>(q) >= setting.size()) return false;
        if (setting[q] != a) return false;
    }
    return true;
}

std::vector<std::size_t> TomographyPlan::covering_groups(const PauliString& s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < groups.size(); ++i)
        if (covers(groups[i], s)) out.push_back(i);
    return out;
}

TomographyPlan default_plan(int n_qubits, std::int64_t shots_per_group, int repetitions) {
    TomographyPlan plan;
    plan.shots_per_group = shots_per_group;
    plan.repetitions = repetitions;
    for (Axis a : {Axis::Z, Axis::X, Axis::Y})
        plan.groups.push_back(BasisSetting(static_cast<std::size_t>(n_qubits), a));
    return plan;
}

namespace {

int parity_on_support(const std::string& bits, const PauliString& s) {
    int par = 0;
    for (const auto& [q, a] : s.ops) {
        (void)a;
        if (bits[static_cast<std::size_t>(q)] == '1') par ^= 1;
    }
    return par ? -1 : 1;
}

bool setting_matches(const BasisSetting& a, const BasisSetting& b) { return a == b; }

EstimatedValue pooled_pm1(double sum, double count) {
    EstimatedValue ev;
    ev.shots = static_cast<std::int64_t>(count);
    ev.mean = sum / count;
    const double var = count > 1.0 ? (count / (count - 1.0)) * (1.0 - ev.mean * ev.mean) : 0.0;
    ev.std_error = std::sqrt(std::max(0.0, var) / count);
    return ev;
}

}  // namespace

EstimatedValue estimate_pauli(const std::vector<GroupCounts>& counts, const TomographyPlan& plan,
                              const PauliString& s) {
    double sum = 0.0, total = 0.0;
    bool covered = false;
    for (const auto& gc : counts) {
        if (!plan.covers(gc.setting, s)) continue;
        covered = true;
        for (const auto& [bits, c] : gc.counts) {
            sum += static_cast<double>(parity_on_support(bits, s)) * static_cast<double>(c);
            total += static_cast<double>(c);
        }
    }
    if (!covered || total <= 0.0)
        throw UncoveredStringError("estimate_pauli: no measurement group covers the string");
    return pooled_pm1(sum, total);
}

namespace {

std::vector<PauliString> standard_strings(int n) {
    std::vector<PauliString> out;
    for (int p = 0; p < n; ++p) out.push_back(PauliString::z(p));
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            out.push_back(PauliString::zz(p, q));
            out.push_back(PauliString::xx(p, q));
            out.push_back(PauliString::yy(p, q));
        }
    return out;
}

double exact_pauli(const sim::QuantumState& state, const PauliString& s) {
    // rotate a copy into the string's basis, then read the Z-parity
    sim::QuantumState st = state;
    for (const auto& [q, a] : s.ops)
        for (const auto& g : basis_rotation_gates(a, q)) st.apply_gate(g);
    const auto p = st.probabilities();
    double val = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        int par = 0;
        for (const auto& [q, a] : s.ops) {
            (void)a;
            if (x & (std::size_t{1} << q)) par ^= 1;
        }
        val += (par ? -1.0 : 1.0) * p[x];
    }
    return val;
}

}  // namespace

PauliExpectations exact_expectations(const sim::QuantumState& state) {
    PauliExpectations out;
    for (const auto& s : standard_strings(state.n_qubits())) {
        EstimatedValue ev;
        ev.mean = exact_pauli(state, s);
        ev.std_error = 0.0;
        ev.shots = 0;
        out[s] = ev;
    }
    return out;
}

PauliExpectations estimate_expectations(const std::vector<GroupCounts>& counts,
                                        const TomographyPlan& plan, int n_qubits) {
    PauliExpectations out;
    for (const auto& s : standard_strings(n_qubits)) out[s] = estimate_pauli(counts, plan, s);
    return out;
}

RdmElements rdm_elements(const PauliExpectations& expectations, int n_qubits) {
    auto get = [&](const PauliString& s) -> const EstimatedValue& {
        auto it = expectations.find(s);
        if (it == expectations.end())
            throw UncoveredStringError("rdm_elements: missing expectation " + s.str(n_qubits));
        return it->second;
    };
    RdmElements el;
    for (int p = 0; p < n_qubits; ++p) el.one_rdm_diag.push_back(get(PauliString::z(p)));
    for (int p = 0; p < n_qubits; ++p)
        for (int q = p + 1; q < n_qubits; ++q) {
            const auto& xx = get(PauliString::xx(p, q));
            const auto& yy = get(PauliString::yy(p, q));
            EstimatedValue ev;
            ev.mean = xx.mean - yy.mean;
            ev.std_error = std::hypot(xx.std_error, yy.std_error);
            ev.shots = xx.shots + yy.shots;
            el.two_rdm[{p, q}] = ev;
        }
    return el;
}

double energy_from_rdm(const RdmElements& elements, const lmg::LmgParams& params) {
    if (elements.one_rdm_diag.empty()) throw std::invalid_argument("energy_from_rdm: no elements");
    double e = 0.0;
    for (const auto& z : elements.one_rdm_diag) e += 0.5 * params.epsilon * z.mean;
    for (const auto& [pq, d] : elements.two_rdm) {
        (void)pq;
        e += 0.5 * params.lambda * d.mean;
    }
    return e;
}

namespace {

OrderParameterEstimate finish_point(double jz, double jz2, double jpm2, double jz_err,
                                    double jz2_err, double jpm2_err, std::vector<double> sigma_z,
                                    int n_qubits, const lmg::LmgParams& params, lmg::Source source,
                                    std::int64_t shots) {
    OrderParameterEstimate est;
    est.point.jz = jz;
    est.point.jz2 = jz2;
    est.point.jpm2 = jpm2;
    est.point.params = params;
    est.point.source = source;
    if (shots > 0) est.point.shots = shots;
    est.jz_err = jz_err;
    est.jz2_err = jz2_err;
    est.jpm2_err = jpm2_err;
    est.sigma_z = std::move(sigma_z);
    (void)n_qubits;
    return est;
}

}  // namespace

OrderParameterEstimate order_parameters_from_paulis(const PauliExpectations& expectations,
                                                    int n_qubits, const lmg::LmgParams& params,
                                                    lmg::Source source) {
    auto get = [&](const PauliString& s) -> const EstimatedValue& {
        auto it = expectations.find(s);
        if (it == expectations.end())
            throw UncoveredStringError("order_parameters_from_paulis: missing " + s.str(n_qubits));
        return it->second;
    };

    double jz = 0.0, jz_var = 0.0;
    std::vector<double> sigma_z;
    std::int64_t shots = 0;
    for (int p = 0; p < n_qubits; ++p) {
        const auto& z = get(PauliString::z(p));
        sigma_z.push_back(z.mean);
        jz += 0.5 * z.mean;
        jz_var += 0.25 * z.std_error * z.std_error;
        shots = std::max(shots, z.shots);
    }

    // <Jz^2> = (n + sum_{p != q} <ZZ>) / 4
    double zz_sum = 0.0, zz_var = 0.0;
    for (int p = 0; p < n_qubits; ++p)
        for (int q = p + 1; q < n_qubits; ++q) {
            const auto& zz = get(PauliString::zz(p, q));
            zz_sum += 2.0 * zz.mean;
            zz_var += 4.0 * zz.std_error * zz.std_error;
        }
    const double jz2 = 0.25 * (n_qubits + zz_sum);
    const double jz2_var = zz_var / 16.0;

    // <J+^2 + J-^2> = (1/2) sum_{p != q} (<XX> - <YY>) = sum_{p<q} (<XX> - <YY>)
    double jpm2 = 0.0, jpm2_var = 0.0;
    for (int p = 0; p < n_qubits; ++p)
        for (int q = p + 1; q < n_qubits; ++q) {
            const auto& xx = get(PauliString::xx(p, q));
            const auto& yy = get(PauliString::yy(p, q));
            jpm2 += xx.mean - yy.mean;
            jpm2_var += xx.std_error * xx.std_error + yy.std_error * yy.std_error;
        }

    return finish_point(jz, jz2, jpm2, std::sqrt(jz_var), std::sqrt(jz2_var), std::sqrt(jpm2_var),
                        std::move(sigma_z), n_qubits, params, source, shots);
}

OrderParameterEstimate order_parameters_from_counts(const std::vector<GroupCounts>& counts,
                                                    int n_qubits, const lmg::LmgParams& params,
                                                    lmg::Source source) {
    const BasisSetting all_z(static_cast<std::size_t>(n_qubits), Axis::Z);
    const BasisSetting all_x(static_cast<std::size_t>(n_qubits), Axis::X);
    const BasisSetting all_y(static_cast<std::size_t>(n_qubits), Axis::Y);

    // per-shot statistics of one basis setting: mean/var of f(bits)
    struct Moments {
        double mean = 0.0, var_of_mean = 0.0, total = 0.0;
    };
    auto collect = [&](const BasisSetting& setting, auto&& f) -> Moments {
        double s1 = 0.0, s2 = 0.0, total = 0.0;
        for (const auto& gc : counts) {
            if (!setting_matches(gc.setting, setting)) continue;
            for (const auto& [bits, c] : gc.counts) {
                const double v = f(bits);
                s1 += v * static_cast<double>(c);
                s2 += v * v * static_cast<double>(c);
                total += static_cast<double>(c);
            }
        }
        if (total <= 0.0)
            throw UncoveredStringError("order_parameters_from_counts: missing basis group");
        Moments m;
        m.total = total;
        m.mean = s1 / total;
        const double var = total > 1.0 ? (s2 / total - m.mean * m.mean) * total / (total - 1.0) : 0.0;
        m.var_of_mean = std::max(0.0, var) / total;
        return m;
    };

    auto sum_sigma = [&](const std::string& bits) {
        double s = 0.0;
        for (char b : bits) s += (b == '1') ? -1.0 : 1.0;
        return s;
    };

    const Moments mz = collect(all_z, [&](const std::string& b) { return 0.5 * sum_sigma(b); });
    const Moments mz2 = collect(all_z, [&](const std::string& b) {
        const double v = 0.5 * sum_sigma(b);
        return v * v;
    });
    // (sum sigma_x)^2 - n  ==  sum_{p != q} sigma_x sigma_x per shot
    const double nq = static_cast<double>(n_qubits);
    const Moments mx = collect(all_x, [&](const std::string& b) {
        const double s = sum_sigma(b);
        return 0.5 * (s * s - nq);
    });
    const Moments my = collect(all_y, [&](const std::string& b) {
        const double s = sum_sigma(b);
        return 0.5 * (s * s - nq);
    });

    std::vector<double> sigma_z(static_cast<std::size_t>(n_qubits), 0.0);
    double ztotal = 0.0;
    for (const auto& gc : counts) {
        if (!setting_matches(gc.setting, all_z)) continue;
        for (const auto& [bits, c] : gc.counts) {
            for (int q = 0; q < n_qubits; ++q)
                sigma_z[static_cast<std::size_t>(q)] +=
                    ((bits[static_cast<std::size_t>(q)] == '1') ? -1.0 : 1.0) *
                    static_cast<double>(c);
            ztotal += static_cast<double>(c);
        }
    }
    for (auto& z : sigma_z) z /= ztotal;

    const double jpm2 = mx.mean - my.mean;
    const double jpm2_err = std::sqrt(mx.var_of_mean + my.var_of_mean);
    auto est = finish_point(mz.mean, mz2.mean, jpm2, std::sqrt(mz.var_of_mean),
                            std::sqrt(mz2.var_of_mean), jpm2_err, std::move(sigma_z), n_qubits,
                            params, source, static_cast<std::int64_t>(mz.total));
    return est;
}

std::string group_counts_to_jsonl(const GroupCounts& gc, std::size_t point_index,
                                  const lmg::LmgParams& params) {
    json j;
    std::string setting;
    for (Axis a : gc.setting) setting.push_back(axis_char(a));
    j["basis_setting"] = setting;
    j["shots"] = gc.shots;
    j["seed"] = gc.seed;
    json jc = json::object();
    for (const auto& [bits, c] : gc.counts) jc[bits] = c;
    j["counts"] = jc;
    j["point_index"] = point_index;
    j["epsilon"] = params.epsilon;
    j["lambda"] = params.lambda;
    j["n_particles"] = params.n_particles;
    return j.dump();
}

GroupCounts group_counts_from_jsonl(const std::string& line, std::size_t* point_index) {
    const json j = json::parse(line);
    GroupCounts gc;
    const std::string setting = j.at("basis_setting").get<std::string>();
    for (char c : setting) gc.setting.push_back(axis_from_char(c));
    gc.shots = j.at("shots").get<std::int64_t>();
    gc.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [bits, c] : j.at("counts").items())
        gc.counts[bits] = c.get<std::int64_t>();
    if (point_index) *point_index = j.value("point_index", std::size_t{0});
    return gc;
}

}  // namespace lipkin::tomo
