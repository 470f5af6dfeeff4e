"""Experiment runners. Each returns ``(report, csv_outputs)``.

``csv_outputs`` maps a file name to ``(header, rows)``; the CLI writes them
next to the JSON report. Seeds for every random draw derive from the
top-level config seed and a fixed per-experiment tag, so a config fully
determines its reports.
"""

import numpy as np

from ..errors import ConfigError
from ..groups import make_group, trivial_action
from ..hierarchy import (DistributionKernel, SecondLayerTemplate, embed_layer1,
                         kernel_pseudometric, layer2_responses, make_layer2_templates,
                         min_gram_eigenvalue, second_layer_measurement)
from ..metrics import bound_k, concentration_experiment
from ..pog import (full_window, local_invariance_gap, localization_check, localized_corpus,
                   pog_represent, pog_table, rect_window, shift_window)
from ..pooling import BinGrid, Nonlinearity
from ..representations import (PoolingConfig, TemplateBank, normalize, orbit_equivalent,
                               project_orbit, represent, represent_many, sample_templates)
from .report import contract, make_report
from .sample_complexity import run_sample_complexity

_TAGS = {"invariance": 1, "selectivity": 2, "concentration": 3, "pog": 4, "hierarchy": 5,
         "sample_complexity": 6}


def seed_for(cfg, experiment, *extra):
    return np.random.SeedSequence([int(cfg.seed), _TAGS[experiment], *extra])


def int_seed(cfg, experiment, *extra):
    """A plain integer seed, for APIs that build their own ``SeedSequence``."""
    return int(seed_for(cfg, experiment, *extra).generate_state(1)[0])


def _group(gspec):
    return make_group(gspec.kind, gspec.p)


def _window(gspec, group, width):
    if gspec.kind == "torus":
        return rect_window(group, gspec.p, width, width)
    return shift_window(group, width)


def _max_group_deviation(signals, bank, pooling, action):
    base = represent_many(signals, bank, pooling)
    worst = 0.0
    for g in range(action.order):
        moved = represent_many(action.act(g, signals), bank, pooling)
        worst = max(worst, float(np.max(np.abs(moved - base))))
    return worst


def run_invariance_suite(cfg):
    sec = cfg.invariance
    results = []
    contracts = []
    for gi, gspec in enumerate(sec.groups):
        _, action = _group(gspec)
        bank = sample_templates(action.dim, sec.k, seed_for(cfg, "invariance", gi, 0), action)
        signals = np.random.default_rng(seed_for(cfg, "invariance", gi, 1)).standard_normal(
            (sec.signals, action.dim))
        label = f"{gspec.kind}{gspec.p}"
        entry = {"group": label, "order": action.order, "dim": action.dim}
        for kind in ("cdf", "sigmoid", "moments"):
            pooling = PoolingConfig(kind=kind, bins=sec.bins, range=sec.range, slope=sec.slope,
                                    moments=sec.moments)
            dev = _max_group_deviation(signals, bank, pooling, action)
            entry[f"max_deviation_{kind}"] = dev
            limit = sec.sigmoid_tol if kind == "sigmoid" else 0.0
            contracts.append(contract(f"{label}/{kind}", dev, limit, dev <= limit))
        results.append(entry)
    return make_report("invariance", cfg.seed, sec.model_dump(mode="json"), {"groups": results},
                       contracts), {}


def _selectivity_pairs(rng, action, count, perturbation):
    """Cycle through orbit-mates, independent draws and perturbed copies."""
    pairs = []
    for idx in range(count):
        first = rng.standard_normal(action.dim)
        kind = idx % 3
        if kind == 0:
            second = action.act(int(rng.integers(action.order)), first)
        elif kind == 1:
            second = rng.standard_normal(action.dim)
        else:
            noise = rng.standard_normal(action.dim)
            second = first + perturbation * np.linalg.norm(first) / np.linalg.norm(noise) * noise
        pairs.append((("orbit", "independent", "perturbed")[kind], first, second))
    return pairs


def selectivity_analysis(pairs, bank, bins, bin_range, moments, tol):
    """Classify each pair by representation equality and compare with the oracle."""
    cdf_pool = PoolingConfig(kind="cdf", bins=bins, range=bin_range)
    mom_pool = PoolingConfig(kind="moments", moments=moments)
    counts = {"cdf": {"false_equivalent": 0, "false_distinct": 0},
              "moments": {"false_equivalent": 0, "false_distinct": 0}}
    logged = []
    equivalent_pairs = 0
    for idx, (kind, first, second) in enumerate(pairs):
        both = np.stack([first, second])
        oracle = orbit_equivalent(*normalize(both), bank.action, tol)
        equivalent_pairs += oracle
        for name, pooling in (("cdf", cdf_pool), ("moments", mom_pool)):
            rep = represent_many(both, bank, pooling)
            gap = float(np.max(np.abs(rep[0] - rep[1])))
            scale = max(1.0, float(np.max(np.abs(rep))))
            same = gap <= tol * scale
            if same != oracle:
                counts[name]["false_equivalent" if same else "false_distinct"] += 1
                if name == "moments":
                    logged.append({"pair": idx, "kind": kind, "oracle": bool(oracle),
                                   "gap": gap, "first": first, "second": second})
    for name in counts:
        counts[name]["total"] = sum(counts[name].values())
    return counts, logged, int(equivalent_pairs)


def run_selectivity_suite(cfg):
    sec = cfg.selectivity
    group, action = _group(sec.group)
    if group.order > sec.max_order:
        raise ConfigError(f"group order {group.order} is too large for the brute-force oracle "
                          f"(max_order={sec.max_order})")
    k = sec.k or 4 * action.dim
    bank = sample_templates(action.dim, k, seed_for(cfg, "selectivity", 0), action)
    rng = np.random.default_rng(seed_for(cfg, "selectivity", 1))
    pairs = _selectivity_pairs(rng, action, sec.pairs, sec.perturbation)
    counts, logged, n_equiv = selectivity_analysis(pairs, bank, sec.bins, sec.range, sec.moments,
                                                   sec.tol)
    results = {"group": f"{sec.group.kind}{sec.group.p}", "dim": action.dim, "k": k,
               "pairs": sec.pairs, "oracle_equivalent_pairs": n_equiv, "confusions": counts,
               "moment_confusion_log": logged}
    contracts = [
        contract("cdf_confusions", counts["cdf"]["total"], 0, counts["cdf"]["total"] == 0),
        contract("moment_confusions", counts["moments"]["total"], sec.max_moment_confusions,
                 counts["moments"]["total"] <= sec.max_moment_confusions),
    ]
    return make_report("selectivity", cfg.seed, sec.model_dump(mode="json"), results,
                       contracts), {}


def run_concentration_suite(cfg):
    sec = cfg.concentration
    _, action = _group(sec.group)
    k_eff = bound_k(sec.n, sec.epsilon, sec.delta, sec.c) if sec.k is None else sec.k
    rep = concentration_experiment(
        n=sec.n, k=k_eff, epsilon=sec.epsilon, delta=sec.delta,
        k_ref=int(round(sec.k_ref_factor * k_eff)), seed=int_seed(cfg, "concentration"),
        action=action, c=sec.c, chunk=sec.chunk)
    results = {"n": rep.n, "k": rep.k, "k_ref": rep.k_ref, "bound_k": rep.bound_k,
               "epsilon": rep.epsilon, "delta": rep.delta, "c": rep.c,
               "violation_fraction": rep.violation_fraction,
               "max_deviation": rep.max_deviation, "rms_deviation": rep.rms_deviation}
    contracts = [contract("violation_fraction", rep.violation_fraction, rep.allowed_fraction,
                          rep.passed)]
    csv_out = {"concentration_pairs.csv": (["pair", "i", "j", "d", "d_hat", "deviation"],
                                           [(n, i, j, a, b, e)
                                            for n, (i, j, a, b, e) in enumerate(rep.pairs)])}
    return make_report("concentration", cfg.seed, sec.model_dump(mode="json"), results,
                       contracts, list(csv_out)), csv_out


def run_pog_suite(cfg):
    sec = cfg.pog
    results = {"groups": []}
    contracts = []
    csv_out = {}
    for gi, gspec in enumerate(sec.groups):
        group, action = _group(gspec)
        window = _window(gspec, group, sec.width)
        bank = sample_templates(action.dim, sec.k, seed_for(cfg, "pog", gi, 0), action)
        grid = BinGrid.uniform(sec.bins)
        signals = np.random.default_rng(seed_for(cfg, "pog", gi, 1)).standard_normal(
            (sec.signals, action.dim))
        if sec.g_tilde is not None and sec.g_tilde >= group.order:
            raise ConfigError(f"g_tilde={sec.g_tilde} is not an element of {group.name}")
        elements = range(group.order) if sec.g_tilde is None else [sec.g_tilde]
        cov = 0.0
        exhaust = 0.0
        for signal in signals:
            base = pog_table(signal, bank, window, grid)
            for g_tilde in elements:
                moved = pog_table(action.act(g_tilde, signal), bank, window, grid)
                shifted = base[group.cayley[group.inv(g_tilde)]]
                cov = max(cov, float(np.max(np.abs(moved - shifted))))
            # averaging the local CDFs over all base points recovers the global CDF
            global_cdf = represent(signal, bank, PoolingConfig(bins=sec.bins)).values
            exhaust = max(exhaust, float(np.max(np.abs(base.mean(axis=0) - global_cdf))))
        label = f"{gspec.kind}{gspec.p}"
        results["groups"].append({"group": label, "window": window.descriptor,
                                  "elements_checked": len(elements),
                                  "covariance_max_error": cov, "exhaustivity_max_error": exhaust})
        contracts.append(contract(f"{label}/covariance", cov, sec.tol, cov <= sec.tol))
        contracts.append(contract(f"{label}/exhaustivity", exhaust, sec.tol, exhaust <= sec.tol))
        if gi == 0:
            tensor = pog_represent(signals[0], bank, window, grid)
            csv_out["pog_tensor.csv"] = (["gbar", "i", "j", "value"], list(tensor.rows()))
    corpus = localized_corpus(sec.localized_triples, sec.corpus_order, seed_for(cfg, "pog", 99))
    gaps = [local_invariance_gap(*item) for item in corpus]
    localized = [localization_check(*item).satisfied for item in corpus]
    failures = sum(g > sec.tol for g in gaps)
    results["local_invariance"] = {"triples": len(corpus), "all_localized": all(localized),
                                   "max_gap": max(gaps), "failures": failures}
    contracts.append(contract("local_invariance_failures", failures, 0,
                              failures == 0 and all(localized)))
    return make_report("pog", cfg.seed, sec.model_dump(mode="json"), results, contracts,
                       list(csv_out)), csv_out


def random_projection_laws(count, action, seed):
    """Projection multisets of random signals on one random template."""
    rng = np.random.default_rng(seed)
    bank = sample_templates(action.dim, 1, rng.integers(2**32), action)
    signals = normalize(rng.standard_normal((count, action.dim)))
    return [project_orbit(s, bank, 0).values for s in signals]


def _triangle_excess(kernel, laws, triples):
    worst = -np.inf
    for a, b, c in triples:
        d_ab = kernel_pseudometric(kernel, laws[a], laws[b])
        d_bc = kernel_pseudometric(kernel, laws[b], laws[c])
        d_ac = kernel_pseudometric(kernel, laws[a], laws[c])
        worst = max(worst, d_ac - d_ab - d_bc, d_ab - d_ac - d_bc, d_bc - d_ab - d_ac)
    return float(worst)


def run_hierarchy_suite(cfg):
    sec = cfg.hierarchy
    group, action = _group(sec.group)
    grid = BinGrid.uniform(sec.bins)
    bank = sample_templates(action.dim, sec.k, seed_for(cfg, "hierarchy", 0), action)
    w1 = shift_window(group, sec.width) if sec.group.kind == "cyclic" else \
        rect_window(group, sec.group.p, sec.width, sec.width)
    w2 = full_window(group)
    rng = np.random.default_rng(seed_for(cfg, "hierarchy", 1))
    signals = rng.standard_normal((sec.signals, action.dim))
    samples = rng.standard_normal((2 * sec.templates, action.dim))
    taus = make_layer2_templates(seed_for(cfg, "hierarchy", 2), sec.templates, bank, w1, grid, samples)

    cov = 0.0
    inv_threshold = 0.0
    inv_sigmoid = 0.0
    for signal in signals:
        base = embed_layer1(signal, bank, w1, grid)
        for tau in taus:
            # center the second-layer nonlinearity on this signal's responses
            b = float(np.median(layer2_responses(base, tau, w2)))
            etas = (Nonlinearity.threshold(b), Nonlinearity.sigmoid(b, sec.slope))
            ref = [second_layer_measurement(signal, bank, w1, w2, tau, eta, grid) for eta in etas]
            for g_tilde in range(group.order):
                moved_signal = action.act(g_tilde, signal)
                vals = [second_layer_measurement(moved_signal, bank, w1, w2, tau, eta, grid)
                        for eta in etas]
                inv_threshold = max(inv_threshold, abs(vals[0] - ref[0]))
                inv_sigmoid = max(inv_sigmoid, abs(vals[1] - ref[1]))
        for g_tilde in range(group.order):
            moved = embed_layer1(action.act(g_tilde, signal), bank, w1, grid)
            shifted = base.values[group.cayley[group.inv(g_tilde)]]
            cov = max(cov, float(np.max(np.abs(moved.values - shifted))))

    laws = random_projection_laws(sec.laws, action, seed_for(cfg, "hierarchy", 3))
    kernels = {"hellinger": DistributionKernel.hellinger(grid),
               "mean_embedding": DistributionKernel.mean_embedding(sec.sigma)}
    triple_rng = np.random.default_rng(seed_for(cfg, "hierarchy", 4))
    triples = [tuple(triple_rng.choice(len(laws), 3, replace=False)) for _ in range(sec.triples)]
    min_eigs = {name: min_gram_eigenvalue(kern, laws) for name, kern in kernels.items()}
    excess = {name: _triangle_excess(kern, laws, triples) for name, kern in kernels.items()}

    composition = composition_gap(signals[0], bank.templates, sec.bins,
                                  seed_for(cfg, "hierarchy", 5))

    results = {"group": f"{sec.group.kind}{sec.group.p}", "window": w1.descriptor,
               "layer1_covariance_max_error": cov,
               "layer2_invariance_max_error_threshold": inv_threshold,
               "layer2_invariance_max_error_sigmoid": inv_sigmoid,
               "gram_min_eigenvalue": min_eigs, "triangle_max_excess": excess,
               "composition_gap": composition}
    contracts = [
        contract("layer1_covariance", cov, sec.tol, cov <= sec.tol),
        contract("layer2_invariance_threshold", inv_threshold, sec.tol, inv_threshold <= sec.tol),
        contract("layer2_invariance_sigmoid", inv_sigmoid, sec.sigmoid_tol,
                 inv_sigmoid <= sec.sigmoid_tol),
        contract("composition", composition, sec.tol, composition <= sec.tol),
    ]
    for name in kernels:
        contracts.append(contract(f"{name}/gram_psd", min_eigs[name], -sec.psd_tol,
                                  min_eigs[name] >= -sec.psd_tol))
        contracts.append(contract(f"{name}/triangle", excess[name], sec.tol,
                                  excess[name] <= sec.tol))
    return make_report("hierarchy", cfg.seed, sec.model_dump(mode="json"), results, contracts), {}


def composition_gap(signal, templates, bins, seed, eta=Nonlinearity.sigmoid(0.5, 5.0)):
    """Two layers over the trivial group versus ``eta`` applied to one layer.

    With one group element every window is the whole group, layer 1 is the
    global CDF representation, and layer 2 reduces to ``eta(<rep, tau>)``.
    """
    group, action = trivial_action(len(signal))
    bank = TemplateBank(np.asarray(templates, dtype=float), action)
    window = full_window(group)
    grid = BinGrid.uniform(bins)
    tau_values = np.abs(np.random.default_rng(seed).standard_normal((1, bank.k, bins)))
    tau_values /= np.sqrt(np.sum(tau_values ** 2) / bank.k)
    tau = SecondLayerTemplate(tau_values, group)
    two_layer = second_layer_measurement(signal, bank, window, window, tau, eta, grid)
    single = represent(signal, bank, PoolingConfig(bins=bins)).values
    direct = float(eta(float(np.sum(single * tau_values[0])) / bank.k))
    return abs(two_layer - direct)


def run_sample_complexity_suite(cfg, threads=1):
    sec = cfg.sample_complexity
    seed = int_seed(cfg, "sample_complexity")
    rep = run_sample_complexity(
        p=sec.p, k_obj=sec.k_obj, noise=sec.noise, trials=sec.trials, n_grid=sec.n_grid,
        test_size=sec.test_size, lam=sec.lam, target=sec.target, templates=sec.templates,
        template_support=sec.template_support, bins=sec.bins, bin_range=sec.range,
        patches=sec.patches, seed=seed, threads=threads)
    n_star = {name: rep.n_star(name) for name in ("raw", "oracle", "invariant")}
    ratio = rep.ratio_raw_over_oracle
    inv_ok = (n_star["oracle"] is not None and n_star["invariant"] is not None
              and n_star["invariant"] <= sec.max_invariant_over_oracle * n_star["oracle"])
    results = {"n_star": n_star, "ratio_raw_over_oracle": ratio,
               "ideal_ratio": rep.ideal_ratio,
               "curves": {name: {"n": rep.n_grid, "mean": rep.mean_accuracy(name),
                                 "std": rep.std_accuracy(name)} for name in n_star}}
    contracts = [
        contract("ratio_raw_over_oracle", ratio, sec.min_ratio,
                 ratio is not None and ratio >= sec.min_ratio),
        contract("invariant_over_oracle",
                 None if not inv_ok and n_star["invariant"] is None else
                 n_star["invariant"] / n_star["oracle"] if n_star["oracle"] else None,
                 sec.max_invariant_over_oracle, inv_ok),
    ]
    csv_out = {"sample_complexity_curves.csv": (["representation", "n", "mean_accuracy", "std"],
                                                list(rep.curves()))}
    return make_report("sample_complexity", cfg.seed, sec.model_dump(mode="json"), results,
                       contracts, list(csv_out)), csv_out


RUNNERS = {
    "invariance": run_invariance_suite,
    "selectivity": run_selectivity_suite,
    "concentration": run_concentration_suite,
    "pog": run_pog_suite,
    "hierarchy": run_hierarchy_suite,
    "sample-complexity": run_sample_complexity_suite,
}
