#include "sparselab/experiment.hpp"

#include <cmath>
#include <sstream>

#include "sparselab/errors.hpp"

namespace sparselab {

namespace {

GridFunction abs_samples(const GridFunction& f) {
    GridFunction out = GridFunction::zeros(f.origin(), f.step(), f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::abs(f[i]);
    return out;
}

GridFunction pow_weight_measure(const WeightFunction& v, double q) {
    // |v|^q as the measure weight of || . * v ||_q^q
    GridFunction out = GridFunction::zeros(v.values.origin(), v.values.step(), v.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = abs_pow(v.values[i], q);
    return out;
}

double lhs_norm_q(const GridFunction& out, const WeightFunction& v, double q) {
    // || out * v ||_q^q = int |out|^q |v|^q
    const GridFunction meas = pow_weight_measure(v, q);
    std::vector<double> terms(out.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        terms[i] = abs_pow(out[i], q) * meas[i].real();
    return out.step() * pairwise_sum(terms);
}

GridFunction scalar_operator_output(const ExperimentConfig& cfg, std::span<const GridFunction> in,
                                    const MultiTileCollection& tiles, PacketProvider& packets) {
    switch (cfg.op) {
        case OperatorChoice::bhtModel:
            return model_operator_output(tiles, packets, in.subspan(0, 2));
        case OperatorChoice::bhtDirect:
            return bht_direct(in[0], in[1]);
        case OperatorChoice::t0:
            return multiplier_apply(symbol_preset(cfg.symbol), in.subspan(0, 2));
        case OperatorChoice::carlesonDirect:
            return carleson_direct(in[0]);
        case OperatorChoice::carlesonModel: {
            const LinearizingData N = carleson_argmax_cut(in[0]);
            return carleson_model_output(tiles, packets, in[0], N);
        }
        case OperatorChoice::varCarleson:
            return variational_carleson_direct(in[0], cfg.var_r);
    }
    throw BadConfig("unhandled operator");
}

std::size_t operator_arity(OperatorChoice op) {
    switch (op) {
        case OperatorChoice::bhtModel:
        case OperatorChoice::bhtDirect:
        case OperatorChoice::t0:
            return 2;
        default:
            return 1;
    }
}

} // namespace

std::vector<std::string> check_sparse_invariants(const SparseFamily& S,
                                                 const MultiTileCollection& coll,
                                                 std::span<const GridFunction> f,
                                                 std::span<const double> s, int M) {
    std::vector<std::string> failures;

    // (a) partition: the tile lists are disjoint and exhaust the collection
    std::vector<int> seen(coll.size(), 0);
    for (const auto& e : S.entries)
        for (std::size_t t : e.tiles) {
            if (t >= coll.size() || seen[t]) {
                failures.push_back("partition: tile repeated or out of range");
                break;
            }
            seen[t] = 1;
        }
    for (std::size_t t = 0; t < coll.size(); ++t)
        if (!seen[t]) {
            failures.push_back("partition: tile dropped");
            break;
        }

    // (b) per-entry size cap
    bool cap_ok = true;
    for (const auto& e : S.entries) {
        std::vector<double> parent(f.size());
        for (std::size_t j = 0; j < f.size(); ++j)
            parent[j] = lp_average(f[j], e.interval, s[j], M - 1);
        for (std::size_t t : e.tiles) {
            for (std::size_t j = 0; j < f.size(); ++j) {
                if (lp_average(f[j], coll[t].space, s[j], M) > S.C_used * parent[j]) {
                    cap_ok = false;
                    break;
                }
            }
            if (!cap_ok) break;
        }
        if (!cap_ok) break;
    }
    if (!cap_ok) failures.push_back("size cap violated");

    // (c) sparsity
    if (!S.entries.empty() && S.eta_witnessed < Rational{1, 2})
        failures.push_back("eta below 1/2");

    return failures;
}

CaseOutcome run_case(const ExperimentConfig& cfg, const SuiteCase& sc,
                     const MultiTileCollection& tiles, PacketProvider& packets) {
    CaseOutcome out;
    const std::size_t arity = operator_arity(cfg.op);
    const WeightFunction v = cfg.make_weight(cfg.grid.zeros());

    if (cfg.vector_depth == 1 && !sc.vectors.empty()) {
        // componentwise application, l^r recombination
        const std::size_t comps = sc.vectors[0].components.size();
        std::vector<GridFunction> outputs;
        for (std::size_t k = 0; k < comps; ++k) {
            std::vector<GridFunction> in;
            for (std::size_t j = 0; j < arity; ++j)
                in.push_back(sc.vectors[j].components[k]);
            outputs.push_back(scalar_operator_output(cfg, in, tiles, packets));
        }
        out.output = vector_lr_combine(outputs, cfg.lr);
        for (std::size_t j = 0; j < arity; ++j)
            out.stopping_functions.push_back(
                vector_lr_combine(sc.vectors[j].components, sc.vectors[j].r));
    } else {
        std::vector<GridFunction> in(sc.functions.begin(),
                                     sc.functions.begin() + static_cast<long>(arity));
        out.output = scalar_operator_output(cfg, in, tiles, packets);
        for (std::size_t j = 0; j < arity; ++j)
            out.stopping_functions.push_back(abs_samples(sc.functions[j]));
    }
    out.stopping_functions.push_back(v.values);

    StoppingConfig scfg;
    scfg.C = cfg.stopping_C;
    scfg.q = cfg.q;
    scfg.M = cfg.M;
    scfg.s.assign(cfg.s.begin(), cfg.s.end());
    if (scfg.s.size() != out.stopping_functions.size())
        scfg.s.resize(out.stopping_functions.size(),
                      scfg.s.empty() ? 2.0 : scfg.s.back());

    out.family = build_sparse_collection(tiles, out.stopping_functions, scfg);
    out.lhs = lhs_norm_q(out.output, v, cfg.q);
    out.rhs = sparse_rhs(out.family, out.stopping_functions, scfg.s, cfg.q, cfg.M);
    return out;
}

Report run_experiment(const ExperimentConfig& cfg) {
    Report rep;
    rep.operator_name = to_string(cfg.op);
    rep.suite_kind = to_string(cfg.kind);
    rep.seed = cfg.seed;
    rep.grid_count = cfg.grid.count;
    rep.q = cfg.q;

    const MultiTileCollection tiles = cfg.make_tiles();
    PacketProvider packets(build_bump(cfg.bump_fraction, cfg.bump_smoothness), cfg.grid);
    const bool needs_packets =
        cfg.op == OperatorChoice::bhtModel || cfg.op == OperatorChoice::carlesonModel;
    if (needs_packets) packets.build_all(tiles);

    const std::size_t arity = operator_arity(cfg.op);
    const auto suite =
        generate_suite(cfg.seed, cfg.kind, cfg.cases, cfg.grid,
                       std::max<int>(3, static_cast<int>(arity) + 1), cfg.lr);

    for (const SuiteCase& sc : suite) {
        CaseRecord rec;
        if (cfg.vector_depth == 1 && !sc.vectors.empty()) {
            std::vector<GridFunction> flat;
            for (const auto& vf : sc.vectors)
                for (const auto& comp : vf.components) flat.push_back(comp);
            rec.inputs_digest = digest_of(flat);
        } else {
            rec.inputs_digest = digest_of(sc.functions);
        }

        CaseOutcome oc = run_case(cfg, sc, tiles, packets);
        rec.lhs = oc.lhs;
        rec.rhs = oc.rhs;
        rec.ratio = oc.rhs > 0.0 ? oc.lhs / oc.rhs : 0.0;
        rec.sparse_entries = oc.family.entries.size();
        rec.eta = oc.family.eta_witnessed.to_double();
        rec.carleson = oc.family.carleson;
        rec.C_used = oc.family.C_used;

        std::vector<double> s(oc.stopping_functions.size());
        for (std::size_t j = 0; j < s.size(); ++j)
            s[j] = j < cfg.s.size() ? cfg.s[j] : cfg.s.back();
        rec.invariant_failures =
            check_sparse_invariants(oc.family, tiles, oc.stopping_functions, s, cfg.M);

        // Fefferman-Stein ratio against the multilinear maximal operator
        const WeightFunction v = cfg.make_weight(cfg.grid.zeros());
        std::vector<GridFunction> maximal_inputs(oc.stopping_functions.begin(),
                                                 oc.stopping_functions.end() - 1);
        std::vector<double> fs_s(maximal_inputs.size());
        for (std::size_t j = 0; j < fs_s.size(); ++j) fs_s[j] = s[j];
        const FeffermanSteinReport fs =
            fefferman_stein_ratio(abs_samples(oc.output), maximal_inputs, fs_s, v, cfg.q);
        rec.fs_lhs = fs.lhs;
        rec.fs_rhs = fs.rhs;
        rec.fs_ratio = fs.ratio;

        // local estimate, for the model form with restricted-type inputs
        if (cfg.op == OperatorChoice::bhtModel && sc.functions.size() >= 3 &&
            cfg.kind == SuiteKind::restrictedSets) {
            const DyadicInterval I0{0, 0};
            const double alphas[3] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
            const LocalEstimateReport ler = local_estimate_check_model(
                tiles, packets, I0, std::span<const GridFunction>(sc.functions.data(), 3),
                std::span<const GridFunction>(sc.functions.data(), 3),
                std::span<const double>(alphas, 3), cfg.M);
            rec.local_ratio = ler.ratio;
        }
        rep.cases.push_back(std::move(rec));
    }
    rep.aggregate();
    return rep;
}

} // namespace sparselab
