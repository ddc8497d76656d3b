"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line in ``ACCEPTANCE_RESULTS``; the summary is
printed at the end of the pytest run.
"""
import json
import math
import time
from pathlib import Path

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import GraphMatcher

from qfg.automorphism import (
    WhitneyStatus,
    induce_edge_map,
    node_automorphisms,
    symmetry_groups,
    whitney_status,
)
from qfg.cli import main
from qfg.frucht import frucht_graph
from qfg.graph_core import (
    SimpleGraph,
    complete_graph,
    diamond_graph,
    edge_plus_isolated_graph,
    path_graph,
    paw_graph,
    star_graph,
)
from qfg.metric_fem import QuantumGraphSpec, discretize, spectrum
from qfg.perm_group import direct_power_c2, group_from_permutations, groups_isomorphic, read_group
from qfg.symmetry_engine import (
    check_symmetry,
    commutes,
    counterexample_paw,
    induced_operator,
    ouhabaz_check,
    phase_operator,
    symmetry_report,
    vonneumann_projection,
)

from conftest import ACCEPTANCE_RESULTS, random_pair

DATA = Path(__file__).resolve().parents[1] / "data"
GROUP_FILES = ["c1", "c2", "c3", "c4", "c5", "c2xc2", "c6", "s3", "d4"]


def record(name, ok, detail=""):
    ACCEPTANCE_RESULTS[name] = (bool(ok), detail)
    print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


def nx_aut_count(h):
    return sum(1 for _ in GraphMatcher(h, h).isomorphisms_iter())


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.node_count))
    h.add_edges_from(g.edges)
    return h


def test_1_frucht_realization(capsys):
    name = "1. Frucht realization"
    t0 = time.perf_counter()
    failures = []
    for stem in GROUP_FILES:
        group = read_group(DATA / "groups" / f"{stem}.txt")
        code = main(["realize", str(DATA / "groups" / f"{stem}.txt"), "--mesh", "4"])
        doc = json.loads(capsys.readouterr().out)
        graph = frucht_graph(group).graph
        # independent oracles: VF2 automorphism count and group isomorphism of A(G)
        oracle_order = nx_aut_count(to_nx(graph))
        iso = groups_isomorphic(group_from_permutations(node_automorphisms(graph)), group)
        witness_ok = len(doc["witness"]) == group.order
        if not (code == 0 and doc["verified"] and doc["aut_order"] == group.order == oracle_order and iso and witness_ok):
            failures.append(stem)
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed <= 300
    record(name, ok, f"{len(GROUP_FILES) - len(failures)}/{len(GROUP_FILES)} groups, {elapsed:.1f}s (limit 300s)")
    assert ok, failures


def test_2_paw_counterexample(capsys):
    name = "2. paw counterexample"
    code = main(["counterexample", "paw"])
    doc = json.loads(capsys.readouterr().out)
    direct = counterexample_paw()
    mism = {m["shared_neighbor"]: (m["common_node_with_e1"], m["common_node_with_e4"]) for m in doc["adjacency_mismatches"]}
    # e1 = (0,1), e2 = (0,2), e3 = (1,2), e4 = (2,3): e1 meets e2 at 0, e4 meets e2 at 2
    checks = [
        code == 0,
        doc == json.loads(json.dumps(direct)),
        doc["permutation"] == "(e1 e4)",
        doc["in_edge_symmetries"],
        not doc["induced_by_node_automorphism"],
        doc["induced_order"] == 2 and doc["edge_sym_order"] == 4,
        not doc["certificate"]["domain_invariant"] and not doc["certificate"]["verdict"],
        doc["center_vertex"] == 2,
        mism.get("e2") == (0, 2),
        any(v["vertex"] == 2 for v in doc["violated_continuity"]),
        doc["flip_assignments_rescuing_domain"] == [],
    ]
    ok = all(checks)
    record(name, ok, f"|A'|={doc['induced_order']} |A*|={doc['edge_sym_order']}, center {doc['center_vertex']}, e2 meets e1 at {mism.get('e2', (None,))[0]} but e4 at {mism.get('e2', (None, None))[1]}")
    assert ok, checks


def test_3_harary_example():
    name = "3. Harary example"
    g = edge_plus_isolated_graph()
    r = whitney_status(g)
    auts = node_automorphisms(g)
    a, a_ind, a_star = r.groups.orders
    klein = groups_isomorphic(group_from_permutations(auts), direct_power_c2(2))
    trivial_induced = all(m.edge_perm.is_identity() for m in r.groups.induced)
    ok = a == 4 and klein and a_ind == 1 and trivial_induced and nx_aut_count(to_nx(g)) == 4
    ok = ok and r.status is WhitneyStatus.HARARY_FAILS
    record(name, ok, f"|A|={a} (C2xC2: {klein}), |A'|={a_ind}")
    assert ok


def test_4_whitney_classification():
    name = "4. Whitney classification"
    t0 = time.perf_counter()
    exc_ok = all(
        whitney_status(g).status is WhitneyStatus.EXCEPTIONAL
        for g in (paw_graph(), diamond_graph(), complete_graph(4))
    )
    scanned = 0
    violations = []
    exceptional_seen = set()
    outside = []
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if n == 0 or n > 6 or not nx.is_connected(h):
            continue
        g = SimpleGraph(n, tuple(tuple(e) for e in h.edges))
        scanned += 1
        a_oracle = nx_aut_count(h)
        a_star_oracle = nx_aut_count(nx.line_graph(h)) if h.number_of_edges() else 1
        sg = symmetry_groups(g)
        a, a_ind, a_star = sg.orders
        if (a, a_star) != (a_oracle, a_star_oracle):
            violations.append(("oracle mismatch", tuple(h.edges)))
            continue
        r = whitney_status(g)
        if r.status is WhitneyStatus.EXCEPTIONAL:
            exceptional_seen.add(r.exceptional)
            continue
        if r.status is not WhitneyStatus.ALL_ISOMORPHIC:
            outside.append((r.status.value, n, a, a_star))
            continue
        if not (a == a_star == a_ind):
            violations.append((tuple(h.edges), a, a_ind, a_star))
    elapsed = time.perf_counter() - t0
    # below three nodes: K1 is trivial, K2 is an isolated edge with |A| = 2 but |A*| = 1
    outside_ok = outside == [("OutsideHypotheses", 1, 1, 1), ("HararyFails", 2, 2, 1)]
    ok = exc_ok and not violations and exceptional_seen == {"paw", "diamond", "K4"} and outside_ok and elapsed <= 600
    record(
        name,
        ok,
        f"{scanned} connected graphs on <=6 nodes, {len(violations)} violations, "
        f"exceptional {sorted(exceptional_seen)}, {elapsed:.1f}s (limit 600s)",
    )
    assert ok, (violations, outside)


def test_5_induced_operator_numerics():
    name = "5. induced operators commute with evolution"
    graphs = {
        "K1,3": star_graph(3),
        "paw": paw_graph(),
        "K3": complete_graph(3),
        "frucht(C3)": frucht_graph(read_group(DATA / "groups" / "c3.txt")).graph,
    }
    worst = {"domain": 0.0, "form": 0.0, "commutator": 0.0, "evolution": 0.0}
    count = 0
    ok = True
    for gname, g in graphs.items():
        for mesh in (8, 16):
            d = discretize(QuantumGraphSpec(g, mesh))
            for pi in node_automorphisms(g):
                cert = check_symmetry(induced_operator(induce_edge_map(pi, g), d), d, times=(0.1, 1.0, 3.7))
                count += 1
                ok &= cert.verdict and cert.domain_residual <= 1e-10 and cert.form_residual <= 1e-10
                ok &= cert.commutator_residual is not None and cert.commutator_residual <= 1e-10
                ok &= cert.evolution_residual is not None and cert.evolution_residual <= 1e-8
                for key, val in (
                    ("domain", cert.domain_residual),
                    ("form", cert.form_residual),
                    ("commutator", cert.commutator_residual or 0.0),
                    ("evolution", cert.evolution_residual or 0.0),
                ):
                    worst[key] = max(worst[key], val)
    record(name, ok, f"{count} operators, worst " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert ok


def test_6_spectral_accuracy():
    name = "6. spectral accuracy"
    errs = {}
    for n in (16, 32):
        lam = spectrum(discretize(QuantumGraphSpec(path_graph(2), n)), 2).eigenvalues[1]
        errs[n] = lam - math.pi**2
    order = math.log2(errs[16] / errs[32])
    edge_ok = abs(errs[32]) / math.pi**2 <= 0.01 and abs(order - 2) <= 0.2

    sp = spectrum(discretize(QuantumGraphSpec(star_graph(3), 32)), 4)
    cl = sp.clusters(1e-6)
    star_target = (math.pi / 2) ** 2
    star_ok = cl[1]["multiplicity"] == 2 and all(
        abs(sp.eigenvalues[i] - star_target) / star_target <= 0.01 for i in cl[1]["indices"]
    )

    sp3 = spectrum(discretize(QuantumGraphSpec(complete_graph(3), 32)), 7)
    tri_ok = True
    for k, c in enumerate(sp3.clusters(1e-6)[1:], start=1):
        target = (2 * math.pi * k / 3) ** 2
        tri_ok &= c["multiplicity"] == 2
        tri_ok &= all(abs(sp3.eigenvalues[i] - target) / target <= 0.01 for i in c["indices"])
    ok = edge_ok and star_ok and tri_ok
    record(
        name,
        ok,
        f"edge rel err {abs(errs[32]) / math.pi**2:.2e}, order {order:.3f}; "
        f"K1,3 {sp.eigenvalues[1]:.5f} x{cl[1]['multiplicity']}; K3 {sp3.eigenvalues[1]:.5f} x2",
    )
    assert ok


def test_7_projection_and_ouhabaz():
    name = "7. von Neumann projection and Ouhabaz criterion"
    worst = 0.0
    proj_ok = True
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 9))
        s = rng.standard_normal((n, n)) + (1j * rng.standard_normal((n, n)) if seed % 2 else 0)
        p = vonneumann_projection(s)
        e = max(np.linalg.norm(p @ p - p), np.linalg.norm(p - p.conj().T))
        worst = max(worst, e)
        proj_ok &= e <= 1e-12
    disagreements = 0
    for seed in range(100):
        a, s, _ = random_pair(seed)
        direct = np.linalg.norm(s @ a - a @ s) <= 1e-10 * max(1, np.linalg.norm(a) * max(1, np.linalg.norm(s)))
        disagreements += ouhabaz_check(s, a) != direct
        disagreements += commutes(s, a) != direct
    ok = proj_ok and disagreements == 0
    record(name, ok, f"max projection defect {worst:.1e} over 100 matrices, {disagreements} disagreements over 100 pairs")
    assert ok


def test_8_u1_phases(capsys):
    name = "8. U(1) phases and order claim"
    ok = True
    for g in (star_graph(3), paw_graph(), complete_graph(3)):
        d = discretize(QuantumGraphSpec(g, 8))
        for theta in (math.pi / 3, math.pi / 2, 1.0, 2.5):
            cert = check_symmetry(phase_operator(d, theta), d)
            ok &= cert.verdict and cert.domain_residual == 0.0
        rep = symmetry_report(QuantumGraphSpec(g, 8))["realized_symmetry_order"]
        ok &= rep["relation"] == ">=" and rep["contains_u1"] and rep["lower_bound"] >= rep["node_aut_order"]
    main(["realize", str(DATA / "groups" / "s3.txt"), "--mesh", "4"])
    doc = json.loads(capsys.readouterr().out)["quantum_graph"]
    ok &= doc["phases_pass"] and doc["realized_symmetry_order"]["relation"] == ">="
    text = json.dumps(doc)
    ok &= '"relation": "=="' not in text
    record(name, ok, "global phases pass; realized order reported as a lower bound only")
    assert ok
