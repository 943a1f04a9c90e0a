"""Lockstep harness comparing the cluster-algebra side with the
representation side along every mutation sequence of a scenario.

Matching used throughout: the negative simple (0, S_j) mutated along a
sequence over QP_m corresponds to the initial cluster variable x_j written
in the cluster of t_m with principal coefficients at t_m.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arithio import print_canonical, rep_to_json
from .decrep import (DecoratedRep, are_isomorphic, direct_sum, e_invariant, e_inj, e_sym,
                     g_vector_rep, h_vector_rep, hom_dim, is_nilpotent, mutate_rep,
                     negative_simple, simple)
from .exactalg import linalg
from .grassmann import cluster_character, f_polynomial_rep, substitution_map
from .qpalg import QP, check_jacobian_relation, match_qps, mutate_qp
from .quiver import IceQuiver, Quiver, b_matrix, full_b_matrix, mutate_quiver
from .seedengine import (explore, f_polynomial_of_variable, g_vector_direct, g_vector_recursive,
                         g_vector_wrt, initial_seed, mutate_seed, mutate_y_seed,
                         principal_extension, y_seed_from_seed)

ALL_CHECKS = (
    "quiver_compat", "laurent", "fconj", "sign_coherence", "g_basis", "fpoly_match",
    "gvec_match", "cc_match", "h_from_f", "h_hom", "cor610", "subst", "e_rigid",
    "e_dwz", "jacobian", "involution_quiver", "involution_seed", "involution_yseed", "involution_qp",
    "involution_rep", "yseed_commute",
)
MAX_PAYLOADS = 20


@dataclass
class Check:
    passed: int = 0
    failed: int = 0
    counterexamples: list = field(default_factory=list)

    def record(self, ok, payload=None):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.counterexamples) < MAX_PAYLOADS:
                self.counterexamples.append(payload or {})

    def merge(self, other):
        self.passed += other.passed
        self.failed += other.failed
        room = MAX_PAYLOADS - len(self.counterexamples)
        self.counterexamples.extend(other.counterexamples[:max(room, 0)])

    def to_json(self):
        return {"passed": self.passed, "failed": self.failed, "counterexamples": self.counterexamples}


@dataclass
class Report:
    scenario: str
    depth: int
    checks: dict = field(default_factory=dict)
    sequences: int = 0
    timing: dict = field(default_factory=dict)

    def check(self, name) -> Check:
        return self.checks.setdefault(name, Check())

    def merge(self, other: "Report"):
        for k, c in other.checks.items():
            self.check(k).merge(c)
        self.sequences += other.sequences
        return self

    @property
    def ok(self):
        return all(c.failed == 0 for c in self.checks.values())

    def to_json(self):
        from .arithio import SCHEMA_VERSION
        return {"schema_version": SCHEMA_VERSION, "scenario": self.scenario, "depth": self.depth,
                "ok": self.ok, "sequences": self.sequences,
                "checks": {k: c.to_json() for k, c in sorted(self.checks.items())},
                "timing": self.timing}


@dataclass
class Scenario:
    name: str
    qp: QP
    depth: int
    checks: tuple = ALL_CHECKS

    @property
    def r(self):
        return self.qp.quiver.n

    def sequences(self, depth=None):
        """All sequences up to the depth, repeats included (admissibility is
        checked while walking)."""
        D = self.depth if depth is None else depth
        for L in range(D + 1):
            yield from itertools.product(range(1, self.r + 1), repeat=L)


def corpus(name: str, depth: int | None = None, trunc: int = 12) -> Scenario:
    if name == "a2":
        qp = QP.make(Quiver(2, [("a", 1, 2)]), trunc=trunc)
        return Scenario("a2", qp, 5 if depth is None else depth)
    if name == "a3":
        qp = QP.make(Quiver(3, [("a", 1, 2), ("b", 2, 3)]), trunc=trunc)
        return Scenario("a3", qp, 6 if depth is None else depth)
    if name in ("triangle", "tri"):
        qp = QP.make(Quiver(3, [("a", 1, 2), ("b", 2, 3), ("c", 3, 1)]), [("a", "b", "c")], trunc=trunc)
        return Scenario("triangle", qp, 5 if depth is None else depth)
    raise KeyError(f"unknown scenario {name!r}; choose a2, a3 or triangle")


CORPUS = ("a2", "a3", "triangle")


def _ice(q: Quiver) -> IceQuiver:
    return IceQuiver(q.n, q.arrows, q.n)


def _seq_str(path):
    return ",".join(map(str, path))


@dataclass
class _Node:
    path: tuple
    qp: QP
    reps: list
    seed: object          # forward principal seed at t0 mutated along path
    gvecs: list           # g-vectors of seed's cluster w.r.t. t0


class _Walker:
    def __init__(self, scen: Scenario, report: Report, iso_draws=5, iso_seed=0):
        self.scen = scen
        self.rep = report
        self.on = set(scen.checks)
        self.iso_draws = iso_draws
        self.iso_seed = iso_seed
        self.p0 = principal_extension(_ice(scen.qp.quiver))
        self._back_cache = {}
        self.collected = []   # (qp, g, rep) for the equal-g isomorphism scan

    def root(self):
        s = initial_seed(self.p0)
        qp = self.scen.qp
        reps = [negative_simple(qp, j) for j in range(1, qp.quiver.n + 1)]
        gv = [g_vector_direct(v, self.p0) for v in s.cluster]
        return _Node((), qp, reps, s, gv)

    def child(self, node: _Node, i: int):
        red, _ = mutate_qp(node.qp, i)
        reps = [mutate_rep(m, i) for m in node.reps]
        s = mutate_seed(node.seed, i)
        gv = [g_vector_direct(v, self.p0) for v in s.cluster]
        return _Node(node.path + (i,), red, reps, s, gv)

    def back_seed(self, node: _Node):
        """Principal seed at t_m mutated back to t0 (cached)."""
        q = node.qp.quiver
        key = (tuple(map(tuple, full_b_matrix(q).tolist())), node.path)
        s = self._back_cache.get(key)
        if s is None:
            pq = principal_extension(_ice(q))
            s = initial_seed(pq)
            for i in reversed(node.path):
                s = mutate_seed(s, i)
            s = (pq, s)
            self._back_cache[key] = s
        return s

    def ck(self, name, ok, **payload):
        if name in self.on:
            payload = {"scenario": self.scen.name, "path": list(payload.pop("path", ()))} | payload
            self.rep.check(name).record(bool(ok), payload)

    # per-node checks
    def visit(self, node: _Node):
        path = node.path
        on = self.on
        q = node.qp.quiver
        r = q.n
        self.rep.sequences += 1
        s = node.seed
        if q.has_two_cycles():
            # the seed side has no counterpart for a QP with 2-cycles
            self.ck("quiver_compat", False, path=path, reason="QP quiver has oriented 2-cycles")
            return
        if "quiver_compat" in on:
            top = b_matrix(s.quiver)[:r, :r]
            ok = not q.has_two_cycles() and np.array_equal(full_b_matrix(q), top)
            self.ck("quiver_compat", ok, path=path, qp_b=full_b_matrix(q).tolist(), seed_b=top.tolist())
        for k, v in enumerate(s.cluster, start=1):
            if "laurent" in on:
                ok = v.is_laurent() and v.as_laurent().has_integer_coeffs()
                self.ck("laurent", ok, path=path, position=k, value=print_canonical(v))
            F = f_polynomial_of_variable(v, r)
            self.ck("fconj", F.constant_term() == 1, path=path, side="seed", position=k,
                    F=print_canonical(F, "u"))
        if "sign_coherence" in on:
            self.ck("sign_coherence", check_sign_coherence(node.gvecs), path=path, g=node.gvecs)
        if "g_basis" in on:
            self.ck("g_basis", check_g_basis(node.gvecs), path=path, g=node.gvecs)
        pq, back = self.back_seed(node)
        for j, m in enumerate(node.reps, start=1):
            self._visit_rep(node, j, m, pq, back)
        if "e_rigid" in on:
            for a, b in itertools.combinations(range(r), 2):
                E = e_invariant(direct_sum(node.reps[a], node.reps[b]))
                self.ck("e_rigid", E == 0, path=path, reps=[a + 1, b + 1], E=E)

    def _visit_rep(self, node, j, m, pq, back):
        path, on = node.path, self.on
        r = m.n
        v = back.cluster[j - 1]
        g_rep = g_vector_rep(m)
        h_rep = h_vector_rep(m)
        F_rep = f_polynomial_rep(m)
        F_alg = f_polynomial_of_variable(v, r)
        base = {"path": path, "rep": j}
        self.ck("fconj", F_rep.constant_term() == 1, side="rep", F=print_canonical(F_rep, "u"), **base)
        self.ck("fconj", F_alg.constant_term() == 1, side="back", F=print_canonical(F_alg, "u"), **base)
        self.ck("fpoly_match", F_rep == F_alg, F_rep=print_canonical(F_rep, "u"),
                F_alg=print_canonical(F_alg, "u"), **base)
        if "gvec_match" in on:
            g_alg = g_vector_direct(v, pq)
            self.ck("gvec_match", tuple(g_rep) == tuple(g_alg), g_rep=g_rep, g_alg=g_alg, **base)
        if "cc_match" in on:
            cc = cluster_character(m, pq)
            self.ck("cc_match", cc == v.as_laurent(), cc=print_canonical(cc), var=print_canonical(v), **base)
        if "h_from_f" in on:
            hf = h_from_fpoly(F_rep)
            self.ck("h_from_f", tuple(hf) == tuple(h_rep), h=h_rep, h_from_F=hf, **base)
        if "h_hom" in on:
            hh = tuple(-hom_dim(simple(m.qp, i), m) for i in range(1, r + 1))
            self.ck("h_hom", hh == tuple(h_rep), h=h_rep, h_hom=hh, **base)
        if "e_rigid" in on:
            E = e_invariant(m)
            self.ck("e_rigid", E == 0, E=E, **base)
            Ei = e_inj(m, m)
            self.ck("e_rigid", E == Ei and 2 * E == e_sym(m, m), E=E, E_inj=Ei, **base)
        if "jacobian" in on:
            ok = check_jacobian_relation(m.qp, m) and is_nilpotent(m)
            self.ck("jacobian", ok, rep_doc=rep_to_json(m), **base)
        if "e_dwz" in on:
            self.collected.append((m.qp, tuple(g_rep), m, path, j))

    # per-edge checks
    def edge(self, parent: _Node, i: int, node: _Node):
        path, on = node.path, self.on
        if "yseed_commute" in on:
            ok = y_seed_from_seed(node.seed).y == mutate_y_seed(y_seed_from_seed(parent.seed), i).y
            self.ck("yseed_commute", ok, path=path)
        if "cor610" in on:
            for j, (m0, m1) in enumerate(zip(parent.reps, node.reps), start=1):
                g, h, h1 = g_vector_rep(m0), h_vector_rep(m0), h_vector_rep(m1)
                gi, hi, h1i = g[i - 1], h[i - 1], h1[i - 1]
                ok = gi == hi - h1i and h1i == -max(gi, 0) and hi == min(0, gi)
                self.ck("cor610", ok, path=path, rep=j, vertex=i, g=g, h=h, h_mut=h1)
        if "subst" in on:
            # coefficient-free: principal coefficients would need the
            # semifield normalisation on the child side
            ice0 = _ice(parent.qp.quiver)
            ice1 = mutate_quiver(ice0, i)
            for j, (m0, m1) in enumerate(zip(parent.reps, node.reps), start=1):
                x0 = cluster_character(m0, ice0)
                x1 = cluster_character(m1, ice1)
                lhs = substitution_map(x0, b_matrix(ice1), i)
                ok = lhs == x1
                self.ck("subst", ok, path=path, rep=j, vertex=i, phi_of_parent=print_canonical(lhs),
                        child=print_canonical(x1))

    def involution(self, grand: _Node, node: _Node):
        """node = mu_i mu_i (grand)."""
        path, on = node.path, self.on
        i = path[-1]
        if "involution_quiver" in on:
            q0 = grand.seed.quiver
            ok = np.array_equal(b_matrix(mutate_quiver(mutate_quiver(q0, i), i)), b_matrix(q0))
            self.ck("involution_quiver", ok, path=path)
        if "involution_seed" in on:
            ok = (np.array_equal(b_matrix(grand.seed.quiver), b_matrix(node.seed.quiver))
                  and grand.seed.cluster == node.seed.cluster)
            self.ck("involution_seed", ok, path=path)
        if "involution_yseed" in on:
            ys = y_seed_from_seed(grand.seed)
            ok = mutate_y_seed(mutate_y_seed(ys, i), i).y == ys.y
            self.ck("involution_yseed", ok, path=path)
        m = match_qps(grand.qp, node.qp)
        self.ck("involution_qp", m is not None, path=path,
                potential=repr(node.qp.potential), original=repr(grand.qp.potential))
        if m is None or "involution_rep" not in on:
            return
        for j, (a, b) in enumerate(zip(grand.reps, node.reps), start=1):
            ok = are_isomorphic(a, b.renamed(m, grand.qp), self.iso_draws, self.iso_seed)
            self.ck("involution_rep", ok, path=path, rep=j)

    def walk(self, node: _Node, depth: int, grand=None, parent=None):
        self.visit(node)
        if parent is not None:
            self.edge(parent, node.path[-1], node)
            if grand is not None and len(node.path) >= 2 and node.path[-1] == node.path[-2]:
                self.involution(grand, node)
        if len(node.path) >= depth:
            return
        for i in range(1, node.qp.quiver.n + 1):
            if not node.qp.admissible(i):
                self.ck("admissible", False, path=node.path + (i,), vertex=i)
                continue
            self.walk(self.child(node, i), depth, parent, node)


def h_from_fpoly(F) -> tuple:
    """h_k = -(top degree of u_k in F with every other u set to 0)."""
    out = []
    for k in range(F.nvars):
        degs = [e[k] for e, _ in F.terms if not any(x for i, x in enumerate(e) if i != k)]
        out.append(-max(degs) if degs else 0)
    return tuple(out)


def check_sign_coherence(gs) -> bool:
    gs = [tuple(g) for g in gs]
    if not gs:
        return True
    for k in range(len(gs[0])):
        col = [g[k] for g in gs]
        if any(v > 0 for v in col) and any(v < 0 for v in col):
            return False
    return True


def check_g_basis(gs) -> bool:
    M = linalg.qmatrix([list(g) for g in gs])
    return M.shape[0] == M.shape[1] and linalg.det(M) in (1, -1)


def cluster_monomial_gvectors(graph, base_quiver, max_degree=2):
    """Map each cluster monomial of degree 1..max_degree (as a multiset of
    variable names) to its g-vector w.r.t. the initial seed."""
    p0 = graph.seeds[0].quiver
    out = {}
    for s in graph.seeds:
        names = [print_canonical(v) for v in s.cluster]
        gs = [g_vector_direct(v, p0) for v in s.cluster]
        for deg in range(1, max_degree + 1):
            for combo in itertools.combinations_with_replacement(range(len(names)), deg):
                key = tuple(sorted(names[k] for k in combo))
                g = tuple(sum(gs[k][c] for k in combo) for c in range(len(gs[0])))
                out[key] = g
    return out


def check_distinct_monomials(graph, max_degree=2) -> bool:
    mons = cluster_monomial_gvectors(graph, None, max_degree)
    return len(set(mons.values())) == len(mons)


def check_conj712(graph, base_quiver: IceQuiver, report: Report | None = None) -> bool:
    """On every explored edge t -> t' = mu_i(t) and every found variable z,
    the g-vector of z w.r.t. t' equals g_vector_recursive of the one
    w.r.t. t."""
    report = report or Report("explore", graph.depth)
    c = report.check("conj712")
    vars_ = [(name, graph.paths[si], pos) for name, (si, pos) in sorted(graph.variables.items())]
    cache = {}

    def gw(t):
        out = cache.get(t)
        if out is None:
            out = [g_vector_wrt(base_quiver, graph.paths[t], pz, pos) for _, pz, pos in vars_]
            cache[t] = out
        return out

    for t, i, t2 in graph.edges:
        bt = b_matrix(graph.seeds[t].quiver)
        # the exchange graph dedups up to permutation, so follow the edge by
        # the literal path instead of trusting index t2
        path2 = graph.paths[t] + (i,)
        g2 = [g_vector_wrt(base_quiver, path2, pz, pos) for _, pz, pos in vars_]
        for (name, _, _), g1, gb in zip(vars_, gw(t), g2):
            rec = g_vector_recursive(g1, bt, i)
            c.record(tuple(rec) == tuple(gb), {"edge": [t, i, t2], "variable": name,
                                                "recursive": list(rec), "direct": list(gb)})
    return c.failed == 0


def check_e_sym_random(count=100, seed=0, report: Report | None = None) -> bool:
    """E^sym(m, n) = E^sym(n, m) on random pairs of small representations
    over A2 and A3 with zero potential."""
    report = report or Report("random", 0)
    c = report.check("e_sym_symmetry")
    rng = np.random.default_rng(seed)
    qps = [corpus("a2").qp, corpus("a3").qp]
    for k in range(count):
        qp = qps[k % 2]
        m1, m2 = random_rep(qp, rng), random_rep(qp, rng)
        a, b = e_sym(m1, m2), e_sym(m2, m1)
        c.record(a == b, {"pair": k, "e_sym": [a, b]})
    return c.failed == 0


def random_rep(qp: QP, rng, max_dim=2) -> DecoratedRep:
    q = qp.quiver
    dims = tuple(int(x) for x in rng.integers(0, max_dim + 1, size=q.n))
    vdims = tuple(int(x) for x in rng.integers(0, 2, size=q.n))
    maps = {}
    for a in q.arrows:
        shape = (dims[a.src - 1], dims[a.tgt - 1])
        maps[a.id] = [[int(x) for x in row] for row in rng.integers(-2, 3, size=shape)]
    return DecoratedRep(qp, dims, vdims, {k: linalg.qmatrix(v, (dims[qp.quiver.arrow(k).src - 1],
                                                                dims[qp.quiver.arrow(k).tgt - 1]))
                                          for k, v in maps.items()})


def _scan_equal_g(collected, report: Report, draws, seed):
    """Among reachable reps, equal g-vectors over the same QP must give
    isomorphic reps.  QPs are identified up to arrow renaming."""
    c = report.check("e_dwz")
    reps_by_qp = []   # list of (qp, {g: [(rep, path, j)]})
    for qp, g, m, path, j in collected:
        slot = None
        for rq, groups in reps_by_qp:
            if rq is qp or rq == qp:
                slot = groups
                break
            if np.array_equal(full_b_matrix(rq.quiver), full_b_matrix(qp.quiver)):
                mm = match_qps(rq, qp)
                if mm is not None:
                    slot = groups
                    m = m.renamed(mm, rq)
                    break
        if slot is None:
            slot = {}
            reps_by_qp.append((qp, slot))
        slot.setdefault(g, []).append((m, path, j))
    for _, groups in reps_by_qp:
        for g, items in groups.items():
            distinct = []
            for m, path, j in items:
                key = (m.dims, m.vdims, tuple((k, tuple(map(tuple, v.tolist()))) for k, v in sorted(m.maps.items())))
                if all(key != d[0] for d in distinct):
                    distinct.append((key, m, path, j))
            first = distinct[0]
            for key, m, path, j in distinct[1:]:
                ok = are_isomorphic(first[1], m, draws, seed)
                c.record(ok, {"g": list(g), "paths": [list(first[2]), list(path)], "reps": [first[3], j]})
            if len(distinct) == 1:
                c.record(True)


def _run_subtree(args):
    name, depth, trunc, checks, first, draws, seed = args
    scen = corpus(name, depth, trunc)
    scen.checks = tuple(checks)
    rep = Report(scen.name, depth)
    w = _Walker(scen, rep, draws, seed)
    root = w.root()
    if first is None:
        w.visit(root)
    else:
        if not root.qp.admissible(first):
            w.ck("admissible", False, path=(first,), vertex=first)
        else:
            child = w.child(root, first)
            w.walk(child, depth, None, root)
    return rep, w.collected


def run_scenario(name: str, depth: int | None = None, checks=ALL_CHECKS, jobs: int = 1,
                 trunc: int = 12, iso_draws: int = 5, iso_seed: int = 0) -> Report:
    """Exhaustive lockstep sweep of one corpus scenario."""
    scen = corpus(name, depth, trunc)
    D = scen.depth
    t0 = time.perf_counter()
    tasks = [(name, D, trunc, tuple(checks), None, iso_draws, iso_seed)]
    if D > 0:
        tasks += [(name, D, trunc, tuple(checks), i, iso_draws, iso_seed)
                  for i in range(1, scen.r + 1)]
    report = Report(scen.name, D)
    collected = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_subtree, tasks))
    else:
        results = [_run_subtree(t) for t in tasks]
    for rep, col in results:
        report.merge(rep)
        collected.extend(col)
    if "e_dwz" in checks:
        _scan_equal_g(collected, report, iso_draws, iso_seed)
    report.timing["sweep_seconds"] = round(time.perf_counter() - t0, 3)
    return report


def run_matched_sequence(scen: Scenario, seq) -> Report:
    """Checks along one sequence only (all prefixes are visited)."""
    from .qpalg import mutate_qp_sequence
    seq = list(seq)
    mutate_qp_sequence(scen.qp, seq)   # raises AdmissibilityError naming the step
    rep = Report(scen.name, len(seq))
    w = _Walker(scen, rep)
    node = w.root()
    w.visit(node)
    grand = None
    for step, i in enumerate(seq):
        nxt = w.child(node, i)
        w.visit(nxt)
        w.edge(node, i, nxt)
        if grand is not None and seq[step - 1] == i:
            w.involution(grand, nxt)
        grand, node = node, nxt
    _scan_equal_g(w.collected, rep, w.iso_draws, w.iso_seed)
    return rep


def explore_checks(name: str, depth: int = 10, report: Report | None = None) -> Report:
    """Exchange-graph level checks on the principal-coefficient seed of a
    corpus quiver: closure, sign coherence, g-bases, distinct monomials,
    the g-vector recursion."""
    scen = corpus(name)
    report = report or Report(name, depth)
    base = _ice(scen.qp.quiver)
    g = explore(initial_seed(principal_extension(base)), depth)
    report.check("closure").record(g.closure and not g.truncated, {"clusters": g.num_clusters})
    p0 = g.seeds[0].quiver
    for s, path in zip(g.seeds, g.paths):
        gs = [g_vector_direct(v, p0) for v in s.cluster]
        report.check("sign_coherence").record(check_sign_coherence(gs), {"path": list(path), "g": gs})
        report.check("g_basis").record(check_g_basis(gs), {"path": list(path), "g": gs})
        for k, v in enumerate(s.cluster, start=1):
            F = f_polynomial_of_variable(v, s.r)
            report.check("fconj").record(F.constant_term() == 1, {"path": list(path), "position": k})
    report.check("distinct_monomials").record(check_distinct_monomials(g, 2), {})
    check_conj712(g, base, report)
    report.timing["clusters"] = g.num_clusters
    return report


EXPLORE_CHECKS = ("closure", "distinct_monomials", "conj712", "e_sym_symmetry")


def parse_checks(spec) -> tuple:
    if spec in (None, "", "all"):
        return ALL_CHECKS + EXPLORE_CHECKS
    names = tuple(s.strip() for s in spec.split(",") if s.strip())
    unknown = [n for n in names if n not in ALL_CHECKS + EXPLORE_CHECKS]
    if unknown:
        from .errors import ParseError
        raise ParseError(f"unknown checks {unknown}; known: {', '.join(ALL_CHECKS + EXPLORE_CHECKS)}")
    return names


def run_full(name: str, depth: int | None = None, checks="all", jobs: int = 1, trunc: int = 12,
             iso_draws: int = 5, iso_seed: int = 0, explore_depth: int = 10) -> Report:
    """Lockstep sweep plus the exchange-graph checks and the random E^sym
    pairs, merged into one report."""
    checks = parse_checks(checks) if isinstance(checks, str) or checks is None else tuple(checks)
    t0 = time.perf_counter()
    sweep = tuple(c for c in checks if c in ALL_CHECKS)
    report = run_scenario(name, depth, sweep, jobs, trunc, iso_draws, iso_seed)
    if set(checks) & {"closure", "distinct_monomials", "conj712"}:
        ex = explore_checks(name, explore_depth)
        for k, c in ex.checks.items():
            if k in checks:
                report.check(k).merge(c)
    if "e_sym_symmetry" in checks:
        check_e_sym_random(100, iso_seed, report)
    report.timing["total_seconds"] = round(time.perf_counter() - t0, 3)
    return report
