#include "pgl.h"

#include <cstring>
#include <json.hpp>
#include <string>

#include "pgl/analysis.hpp"
#include "pgl/gates.hpp"
#include "pgl/json_io.hpp"
#include "pgl/reference_states.hpp"

using nlohmann::json;

struct pgl_circuit {
    pgl::GateCircuits gate;
};

struct pgl_run_result {
    pgl::RunResult result;
    pgl::Circuit circuit;
    pgl::GateKind kind;
    std::vector<pgl::QubitCoeffs> qubits;
};

namespace {

thread_local std::string g_last_error;

pgl_status to_status(const pgl::Error& e) {
    using pgl::ErrorKind;
    switch (e.kind()) {
        case ErrorKind::InvalidArgument: return PGL_ERR_INVALID_ARG;
        case ErrorKind::Registry: return PGL_ERR_REGISTRY;
        case ErrorKind::Validation: return PGL_ERR_VALIDATION;
        case ErrorKind::ZeroNorm: return PGL_ERR_ZERO_NORM;
        case ErrorKind::Sector: return PGL_ERR_SECTOR;
        case ErrorKind::Precondition: return PGL_ERR_PRECONDITION;
        case ErrorKind::Config: return PGL_ERR_CONFIG;
        case ErrorKind::Io: return PGL_ERR_IO;
    }
    return PGL_ERR_UNKNOWN;
}

template <typename Fn>
pgl_status guarded(Fn&& fn) {
    try {
        fn();
        return PGL_OK;
    } catch (const pgl::Error& e) {
        g_last_error = e.what();
        return to_status(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PGL_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown error";
        return PGL_ERR_UNKNOWN;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

pgl::GateOptions convert(const pgl_gate_options* opts) {
    pgl::GateOptions o;
    if (opts) {
        o.with_bs = opts->with_bs != 0;
        o.recycle = opts->recycle != 0;
        o.apply_feed_forward = opts->apply_feed_forward != 0;
    }
    return o;
}

std::vector<pgl::QubitCoeffs> convert_coeffs(const double* coeffs, int n_qubits) {
    if (!coeffs) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null coefficient array");
    std::vector<pgl::QubitCoeffs> qubits;
    for (int i = 0; i < n_qubits; ++i) {
        qubits.push_back({{coeffs[4 * i], coeffs[4 * i + 1]}, {coeffs[4 * i + 2], coeffs[4 * i + 3]}});
        qubits.back().validate();
    }
    return qubits;
}

json record_to_json(const pgl::BranchOutcome& b) {
    json rec = json::object();
    for (const auto& [label, click] : b.record)
        rec[label] = {{"outcome", click.outcome}, {"count_h", click.count_h},
                      {"count_v", click.count_v}, {"met", click.met}};
    return rec;
}

json branch_to_json(const pgl::BranchOutcome& b) {
    json j;
    j["record"] = record_to_json(b);
    j["probability"] = b.probability;
    j["success"] = b.success;
    j["recycled"] = b.recycled;
    if (!b.success) j["failed_at"] = b.failed_at;
    if (b.success) j["state"] = json::parse(pgl::state_to_json(b.state));
    return j;
}

int expected_qubits(pgl::GateKind k) { return k == pgl::GateKind::CPF ? 2 : 3; }

}  // namespace

extern "C" {

const char* pgl_version(void) { return "pgl 1.0.0"; }

const char* pgl_last_error(void) { return g_last_error.c_str(); }

void pgl_string_free(char* s) { delete[] s; }

pgl_status pgl_circuit_build(pgl_gate_kind kind, const pgl_gate_options* opts, pgl_circuit** out) {
    return guarded([&] {
        if (!out) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null output handle");
        pgl::GateKind k = kind == PGL_GATE_CPF ? pgl::GateKind::CPF : pgl::GateKind::Toffoli;
        auto* c = new pgl_circuit{pgl::build_gate(k, convert(opts))};
        *out = c;
    });
}

pgl_status pgl_circuit_from_json(const char* text, pgl_circuit** out) {
    return guarded([&] {
        if (!text || !out) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        pgl::Circuit c = pgl::circuit_from_json(text);
        pgl::GateCircuits g;
        g.kind = c.outputs.size() == 2 ? pgl::GateKind::CPF : pgl::GateKind::Toffoli;
        g.main = std::move(c);
        *out = new pgl_circuit{std::move(g)};
    });
}

pgl_status pgl_circuit_to_json(const pgl_circuit* c, char** json_out) {
    return guarded([&] {
        if (!c || !json_out) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        *json_out = dup_string(pgl::circuit_to_json(c->gate.main));
    });
}

void pgl_circuit_free(pgl_circuit* c) { delete c; }

pgl_status pgl_run_product(const pgl_circuit* c, const double* coeffs, int n_qubits, pgl_run_result** out) {
    return guarded([&] {
        if (!c || !out) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        if (n_qubits != expected_qubits(c->gate.kind))
            throw pgl::Error(pgl::ErrorKind::Config, "wrong number of gate qubits for this circuit");
        auto qubits = convert_coeffs(coeffs, n_qubits);
        pgl::FockState input = pgl::encode_input(c->gate, qubits);
        auto* r = new pgl_run_result{pgl::run_gate(c->gate, input), c->gate.main, c->gate.kind, qubits};
        *out = r;
    });
}

pgl_status pgl_run_basis(const pgl_circuit* c, int basis_index, pgl_run_result** out) {
    return guarded([&] {
        if (!c || !out) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        const int n = expected_qubits(c->gate.kind);
        if (basis_index < 0 || basis_index >= (1 << n))
            throw pgl::Error(pgl::ErrorKind::InvalidArgument, "basis index out of range");
        std::vector<pgl::QubitCoeffs> qubits;
        for (int q = n - 1; q >= 0; --q) qubits.push_back(pgl::QubitCoeffs::basis((basis_index >> q) & 1));
        pgl::FockState input = pgl::encode_input(c->gate, qubits);
        *out = new pgl_run_result{pgl::run_gate(c->gate, input), c->gate.main, c->gate.kind, qubits};
    });
}

void pgl_run_result_free(pgl_run_result* r) { delete r; }

pgl_status pgl_result_branch_count(const pgl_run_result* r, int* count) {
    return guarded([&] {
        if (!r || !count) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        *count = static_cast<int>(r->result.branches.size());
    });
}

pgl_status pgl_result_branch_probability(const pgl_run_result* r, int i, double* p) {
    return guarded([&] {
        if (!r || !p) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        *p = r->result.branches.at(i).probability;
    });
}

pgl_status pgl_result_branch_success(const pgl_run_result* r, int i, int* success) {
    return guarded([&] {
        if (!r || !success) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        *success = r->result.branches.at(i).success ? 1 : 0;
    });
}

pgl_status pgl_result_branch_json(const pgl_run_result* r, int i, char** json_out) {
    return guarded([&] {
        if (!r || !json_out) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        *json_out = dup_string(branch_to_json(r->result.branches.at(i)).dump(2));
    });
}

pgl_status pgl_result_success_probability(const pgl_run_result* r, double* p) {
    return guarded([&] {
        if (!r || !p) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        *p = r->result.success_probability();
    });
}

pgl_status pgl_result_fidelity(const pgl_run_result* r, double* fidelity) {
    return guarded([&] {
        if (!r || !fidelity) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        *fidelity = pgl::gate_fidelity(r->result, r->circuit, pgl::ideal_output(r->kind, r->qubits));
    });
}

pgl_status pgl_cpf_verify(const double* coeffs2, char** report_json, int* pass) {
    return guarded([&] {
        if (!report_json || !pass) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        auto qubits = convert_coeffs(coeffs2, 2);
        pgl::GateCircuits gate = pgl::build_gate(pgl::GateKind::CPF);
        pgl::RunResult r = pgl::run_gate(gate, pgl::encode_input(gate, qubits));
        pgl::LogicalState ideal = pgl::ideal_output(pgl::GateKind::CPF, qubits);

        json branches = json::array();
        bool ok = true;
        double total = r.success_probability();
        for (const auto* b : r.successes()) {
            double f = pgl::state_fidelity(pgl::decode_output(b->state, gate.main), ideal);
            json row = branch_to_json(*b);
            row["fidelity"] = f;
            row.erase("state");
            branches.push_back(std::move(row));
            ok = ok && std::abs(b->probability - 0.125) < 1e-10 && f >= 1.0 - 1e-10;
        }
        ok = ok && std::abs(total - 0.25) < 1e-10 && r.successes().size() == 2 &&
             std::abs(r.total_probability() - 1.0) < 1e-10;
        json j;
        j["branches"] = std::move(branches);
        j["success_probability"] = total;
        j["total_probability"] = r.total_probability();
        j["pass"] = ok;
        *report_json = dup_string(j.dump(2));
        *pass = ok ? 1 : 0;
    });
}

pgl_status pgl_toffoli_verify(const pgl_gate_options* opts, const double* coeffs3, char** report_json,
                              int* pass) {
    return guarded([&] {
        if (!report_json || !pass) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        auto qubits = convert_coeffs(coeffs3, 3);
        pgl::GateCircuits gate = pgl::build_gate(pgl::GateKind::Toffoli, convert(opts));
        pgl::RunResult r = pgl::run_gate(gate, pgl::encode_input(gate, qubits));
        pgl::LogicalState ideal = pgl::ideal_output(pgl::GateKind::Toffoli, qubits);

        json branches = json::array();
        bool ok = true;
        for (const auto* b : r.successes()) {
            double f = pgl::state_fidelity(pgl::decode_output(b->state, gate.main), ideal);
            json row = branch_to_json(*b);
            row["fidelity"] = f;
            row.erase("state");
            branches.push_back(std::move(row));
            ok = ok && f >= 1.0 - 1e-9;
        }
        ok = ok && !r.successes().empty() && std::abs(r.total_probability() - 1.0) < 1e-10;
        json j;
        j["branches"] = std::move(branches);
        j["success_probability"] = r.success_probability();
        j["total_probability"] = r.total_probability();
        j["pass"] = ok;
        *report_json = dup_string(j.dump(2));
        *pass = ok ? 1 : 0;
    });
}

pgl_status pgl_truth_table(pgl_gate_kind kind, const pgl_gate_options* opts, char** json_out) {
    return guarded([&] {
        if (!json_out) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        pgl::GateKind k = kind == PGL_GATE_CPF ? pgl::GateKind::CPF : pgl::GateKind::Toffoli;
        auto table = pgl::truth_table(k, convert(opts));
        json rows = json::array();
        for (const auto& e : table)
            rows.push_back({{"success_probability", e.success_probability},
                            {"output_populations", e.output_populations}});
        json j;
        j["table"] = std::move(rows);
        *json_out = dup_string(j.dump(2));
    });
}

pgl_status pgl_sweep_csv(double grid_start, double grid_stop, double grid_step, const pgl_gate_options* opts,
                         uint64_t seed, int draws, int threads, char** csv_out) {
    return guarded([&] {
        if (!csv_out) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        pgl::GridSpec grid{grid_start, grid_stop, grid_step};
        pgl::SweepTable table = pgl::sweep_alpha2(grid, convert(opts), seed, draws, threads);
        *csv_out = dup_string(table.to_csv());
    });
}

pgl_status pgl_trace_checkpoint(pgl_gate_kind kind, const pgl_gate_options* opts, const double* coeffs,
                                const char* checkpoint, char** json_out) {
    return guarded([&] {
        if (!checkpoint || !json_out) throw pgl::Error(pgl::ErrorKind::InvalidArgument, "null argument");
        pgl::GateKind k = kind == PGL_GATE_CPF ? pgl::GateKind::CPF : pgl::GateKind::Toffoli;
        auto qubits = convert_coeffs(coeffs, expected_qubits(k));
        pgl::GateCircuits gate = pgl::build_gate(k, convert(opts));
        pgl::CheckpointDiff diff = pgl::diff_checkpoint(gate, qubits, checkpoint);
        json kets = json::array();
        for (const auto& kd : diff.kets)
            kets.push_back({{"ket", kd.ket},
                            {"simulated", {kd.simulated.real(), kd.simulated.imag()}},
                            {"reference", {kd.reference.real(), kd.reference.imag()}},
                            {"abs_diff", kd.abs_diff}});
        json j;
        j["checkpoint"] = diff.checkpoint;
        j["instances"] = diff.instances;
        j["cumulative_probability"] = diff.cumulative_probability;
        if (diff.reference_probability) j["reference_probability"] = *diff.reference_probability;
        j["has_reference"] = diff.has_reference;
        j["max_abs_diff"] = diff.max_abs_diff;
        j["kets"] = std::move(kets);
        *json_out = dup_string(j.dump(2));
    });
}

pgl_status pgl_oracle_check(int modes, int max_photons, int trials, uint64_t seed, double* max_deviation,
                            char** json_out) {
    return guarded([&] {
        pgl::OracleCheckResult r = pgl::oracle_check(modes, max_photons, trials, seed);
        if (max_deviation) *max_deviation = r.max_deviation;
        if (json_out) {
            json j;
            j["trials"] = r.trials;
            j["amplitudes_checked"] = r.amplitudes_checked;
            j["max_deviation"] = r.max_deviation;
            j["pass"] = r.max_deviation < 1e-10;
            *json_out = dup_string(j.dump(2));
        }
    });
}

}  // extern "C"
