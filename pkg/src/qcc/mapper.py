"""Program-to-hardware qubit placement.

Two objectives over the program's 2Q and readout operations, each scored
with the reliability matrix:

* SUM_LOG: maximise the sum of log reliabilities (log of the product).
  Exact branch-and-bound, lexicographically smallest optimum.
* MAX_MIN: maximise the worst operation reliability. Binary search on a
  threshold with a constraint search that drops any partial placement
  creating an operation below it.
"""
from __future__ import annotations

import bisect
import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .ir import InteractionProfile
from .reliability import ReliabilityMatrix

log = logging.getLogger(__name__)


class MapObjective(Enum):
    SUM_LOG = "sumlog"
    MAX_MIN = "maxmin"


class ProgramTooLargeError(ValueError):
    """More program qubits than the device has."""


class SearchLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class Mapping:
    assign: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assign", tuple(int(h) for h in self.assign))
        if len(set(self.assign)) != len(self.assign):
            raise ValueError(f"mapping is not injective: {self.assign}")
        if any(h < 0 for h in self.assign):
            raise ValueError("negative hardware index")

    def __getitem__(self, q: int) -> int:
        return self.assign[q]

    def __len__(self) -> int:
        return len(self.assign)

    def inverse(self) -> dict[int, int]:
        return {h: q for q, h in enumerate(self.assign)}

    def check(self, num_hw: int) -> None:
        if any(h >= num_hw for h in self.assign):
            raise ValueError(f"mapping {self.assign} exceeds {num_hw} hardware qubits")


def _require_fit(nq: int, nh: int) -> None:
    if nq > nh:
        raise ProgramTooLargeError(f"program needs {nq} qubits, device has {nh}")


def trivial_map(num_program_qubits: int, num_hw: int | None = None) -> Mapping:
    if num_hw is not None:
        _require_fit(num_program_qubits, num_hw)
    return Mapping(tuple(range(num_program_qubits)))


class _Problem:
    """Flattened objective data shared by the searches."""

    def __init__(self, profile: InteractionProfile, rm: ReliabilityMatrix):
        self.nq = profile.num_qubits
        self.nh = rm.num_qubits
        _require_fit(self.nq, self.nh)
        self.ops = sorted((c, t, n) for (c, t), n in profile.directed.items())
        self.measured = sorted(profile.measured)
        r2q = np.array(rm.r2q, dtype=float)
        np.fill_diagonal(r2q, 0.0)
        self.r2q = r2q
        self.rro = np.asarray(rm.rro, dtype=float)
        with np.errstate(divide="ignore"):
            self.l2q = np.log(r2q)
            self.lro = np.log(self.rro)

    def op_values(self, assign: Sequence[int]) -> list[float]:
        vals = [self.r2q[assign[c], assign[t]] for c, t, _ in self.ops]
        vals += [self.rro[assign[q]] for q in self.measured]
        return vals

    def sum_log(self, assign: Sequence[int]) -> float:
        terms = [n * self.l2q[assign[c], assign[t]] for c, t, n in self.ops]
        terms += [self.lro[assign[q]] for q in self.measured]
        return math.fsum(terms)

    def min_rel(self, assign: Sequence[int]) -> float:
        vals = self.op_values(assign)
        return min(vals) if vals else 1.0

    def score(self, assign, objective: MapObjective) -> float:
        return self.sum_log(assign) if objective is MapObjective.SUM_LOG else self.min_rel(assign)


def exhaustive_map(profile: InteractionProfile, rm: ReliabilityMatrix,
                   objective: MapObjective | str = MapObjective.SUM_LOG,
                   limit: int = 10**7) -> tuple[Mapping, float]:
    """Enumerate every injective placement (test oracle)."""
    objective = MapObjective(objective)
    prob = _Problem(profile, rm)
    count = math.perm(prob.nh, prob.nq)
    if count > limit:
        raise SearchLimitError(f"{count} placements exceed the enumeration limit {limit}")
    best, best_val = None, -math.inf
    for assign in itertools.permutations(range(prob.nh), prob.nq):
        val = prob.score(assign, objective)
        if val > best_val:
            best, best_val = assign, val
    return Mapping(best), best_val


# -- SUM_LOG ------------------------------------------------------------------

class _SumLogSearch:
    """Depth-first branch-and-bound for the SUM_LOG objective.

    Every 2Q operation is owned by one endpoint: a placed endpoint if there is
    one, otherwise the endpoint with more partners. For each owner, its
    unplaced partners must land on distinct free qubits, so the best they can
    do is the owner's top free neighbour values paired with the largest
    multiplicities. An unplaced owner also maximises over its own position
    (only when ``strong``; that costs O(|H|^2) per owner and is reserved for
    the exact searches).
    """

    _SLACK = 1e-12

    def __init__(self, prob: _Problem, node_limit: int | None, strong: bool = True):
        self.p = prob
        self.node_limit = node_limit
        self.strong = strong
        self.nodes = 0
        nh, nq = prob.nh, prob.nq
        l2q = prob.l2q
        # best of both directions: an upper bound for any op between the two
        vmax = np.maximum(l2q, l2q.T)
        np.fill_diagonal(vmax, -math.inf)
        self.vmax = vmax
        self.order = [sorted((x for x in range(nh) if x != h), key=lambda x, h=h: -vmax[h, x])
                      for h in range(nh)]
        self.ro_order = sorted(range(nh), key=lambda h: -prob.lro[h])
        self.weight = [dict() for _ in range(nq)]          # q -> {partner: op count}
        for c, t, n in prob.ops:
            self.weight[c][t] = self.weight[c].get(t, 0) + n
            self.weight[t][c] = self.weight[t].get(c, 0) + n
        self.rank = sorted(range(nq), key=lambda q: (-len(self.weight[q]), q))
        self.pos = {q: i for i, q in enumerate(self.rank)}
        self.measured = prob.measured

    def _top_free(self, order, used, k, skip=-1):
        vals = []
        for x in order:
            if not used[x] and x != skip:
                vals.append(x)
                if len(vals) == k:
                    break
        return vals

    def bound(self, assign: list, used: list) -> float:
        p = self.p
        terms = []
        for c, t, n in p.ops:
            hc, ht = assign[c], assign[t]
            if hc >= 0 and ht >= 0:
                terms.append(n * p.l2q[hc, ht])
        # owner -> (weights of unplaced partners, [(weight, hw) of placed partners])
        owned: dict[int, tuple[list[int], list[tuple[int, int]]]] = {}
        pos = self.pos
        strong = self.strong
        # an unplaced qubit with two or more placed partners owns those ops
        # (its single position couples them); otherwise the placed side owns
        # them (its partners need distinct free neighbours)
        couples = [strong and assign[q] < 0 and sum(assign[r] >= 0 for r in self.weight[q]) >= 2
                   for q in range(p.nq)]
        for q in range(p.nq):
            hq = assign[q]
            for r, n in self.weight[q].items():
                hr = assign[r]
                if hr >= 0:
                    if hq < 0 and couples[q]:
                        owned.setdefault(q, ([], []))[1].append((n, hr))
                    continue
                if hq >= 0:
                    if not couples[r]:
                        owned.setdefault(q, ([], []))[0].append(n)
                elif pos[q] < pos[r]:
                    owned.setdefault(q, ([], []))[0].append(n)
        for q, (ws, fixed) in owned.items():
            ws.sort(reverse=True)
            h = assign[q]
            if h >= 0:
                xs = self._top_free(self.order[h], used, len(ws))
                if len(xs) < len(ws):
                    return -math.inf
                terms.extend(w * self.vmax[h, x] for w, x in zip(ws, xs))
            elif strong:
                best = -math.inf
                for y in range(p.nh):
                    if used[y]:
                        continue
                    xs = self._top_free(self.order[y], used, len(ws), skip=y)
                    if len(xs) < len(ws):
                        continue
                    val = math.fsum([w * self.vmax[y, x] for w, x in zip(ws, xs)]
                                    + [w * self.vmax[y, hr] for w, hr in fixed])
                    best = max(best, val)
                terms.append(best)
            else:
                terms.append(sum(ws) * self.gmax)
        free_ro = [q for q in self.measured if assign[q] < 0]
        for q in self.measured:
            if assign[q] >= 0:
                terms.append(p.lro[assign[q]])
        if free_ro:
            xs = self._top_free(self.ro_order, used, len(free_ro))
            terms.extend(p.lro[x] for x in xs)
        return math.fsum(terms)

    @property
    def gmax(self) -> float:
        off = self.vmax[np.isfinite(self.vmax)]
        return float(off.max()) if off.size else 0.0

    def run(self, order: Sequence[int], target: float | None = None):
        """DFS over ``order``. Without target: maximise. With target: return
        the first leaf whose score reaches it."""
        p = self.p
        assign = [-1] * p.nq
        used = [False] * p.nh
        best = [None, -math.inf]
        limited = [False]
        slack = self._SLACK

        def dfs(depth: int) -> bool:
            if depth == len(order):
                val = p.sum_log(assign)
                if target is not None:
                    if val >= target:
                        best[0], best[1] = tuple(assign), val
                        return True
                    return False
                if val > best[1]:
                    best[0], best[1] = tuple(assign), val
                return False
            q = order[depth]
            for h in range(p.nh):
                if used[h]:
                    continue
                self.nodes += 1
                if self.node_limit is not None and self.nodes > self.node_limit and best[0] is not None:
                    limited[0] = True
                    return True
                assign[q] = h
                used[h] = True
                b = self.bound(assign, used)
                # the bound is rounded, so keep anything within a hair of the bar
                bar = target if target is not None else best[1]
                keep = best[0] is None and target is None or b >= bar - slack * (1.0 + abs(bar))
                if keep and dfs(depth + 1):
                    assign[q] = -1
                    used[h] = False
                    return True
                assign[q] = -1
                used[h] = False
            return False

        dfs(0)
        return best[0], best[1], limited[0]


def _constrained_order(prob: _Problem) -> list[int]:
    """Most-connected qubit first, then repeatedly the qubit with most placed partners."""
    nbrs: dict[int, set[int]] = {q: set() for q in range(prob.nq)}
    for c, t, _ in prob.ops:
        nbrs[c].add(t)
        nbrs[t].add(c)
    order: list[int] = []
    placed: set[int] = set()
    while len(order) < prob.nq:
        q = max((q for q in range(prob.nq) if q not in placed),
                key=lambda q: (len(nbrs[q] & placed), len(nbrs[q]), q in prob.measured, -q))
        order.append(q)
        placed.add(q)
    return order


def _map_sum_log(prob: _Problem, exact_limit: int, node_limit: int) -> tuple[tuple[int, ...], float]:
    exact = prob.nq <= exact_limit
    search = _SumLogSearch(prob, None if exact else node_limit, strong=exact)
    assign, val, _ = search.run(_constrained_order(prob))
    if not exact:
        return assign, val
    # lexicographically smallest placement achieving the optimum
    search.nodes = 0
    lex, lex_val, _ = search.run(list(range(prob.nq)), target=val)
    return (lex, lex_val) if lex is not None else (assign, val)


# -- MAX_MIN ------------------------------------------------------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


class _ThresholdSearch:
    """Is there an injective placement with every operation reliability >= t?"""

    def __init__(self, prob: _Problem, node_limit: int | None):
        self.p = prob
        self.node_limit = node_limit
        nq = prob.nq
        self.out_ops: list[list[int]] = [[] for _ in range(nq)]   # q -> targets of q
        self.in_ops: list[list[int]] = [[] for _ in range(nq)]    # q -> controls of q
        for c, t, _ in prob.ops:
            self.out_ops[c].append(t)
            self.in_ops[t].append(c)
        self.degree = [len(set(self.out_ops[q]) | set(self.in_ops[q])) for q in range(nq)]

    def feasible(self, t: float) -> tuple[int, ...] | None:
        p = self.p
        nh, nq = p.nh, p.nq
        full = (1 << nh) - 1
        ok2 = p.r2q >= t
        out_mask = [sum(1 << int(x) for x in np.flatnonzero(ok2[h])) for h in range(nh)]
        in_mask = [sum(1 << int(x) for x in np.flatnonzero(ok2[:, h])) for h in range(nh)]
        ro_mask = sum(1 << int(h) for h in np.flatnonzero(p.rro >= t))
        domains = [full] * nq
        for q in p.measured:
            domains[q] &= ro_mask
        for q in range(nq):
            if self.out_ops[q]:
                domains[q] &= sum(1 << h for h in range(nh) if out_mask[h])
            if self.in_ops[q]:
                domains[q] &= sum(1 << h for h in range(nh) if in_mask[h])
            if not domains[q]:
                return None
        assign = [-1] * nq
        nodes = [0]
        degree = self.degree
        out_ops, in_ops = self.out_ops, self.in_ops

        def choose(doms) -> int:
            best, key = -1, None
            for q in range(nq):
                if assign[q] < 0:
                    k = (_popcount(doms[q]), -degree[q], q)
                    if key is None or k < key:
                        best, key = q, k
            return best

        def dfs(doms: list[int], depth: int) -> bool:
            if depth == nq:
                return True
            q = choose(doms)
            d = doms[q]
            while d:
                low = d & -d
                h = low.bit_length() - 1
                d ^= low
                nodes[0] += 1
                if self.node_limit is not None and nodes[0] > self.node_limit:
                    raise SearchLimitError("threshold search exceeded its node limit")
                new = doms[:]
                taken = ~low
                dead = False
                for r in range(nq):
                    if assign[r] < 0 and r != q:
                        new[r] &= taken
                for r in out_ops[q]:
                    if assign[r] < 0:
                        new[r] &= out_mask[h]
                for r in in_ops[q]:
                    if assign[r] < 0:
                        new[r] &= in_mask[h]
                for r in range(nq):
                    if assign[r] < 0 and r != q and not new[r]:
                        dead = True
                        break
                if dead:
                    continue
                assign[q] = h
                if dfs(new, depth + 1):
                    return True
                assign[q] = -1
            return False

        if dfs(domains, 0):
            return tuple(assign)
        return None


def _map_max_min(prob: _Problem, epsilon: float, node_limit: int | None) -> tuple[tuple[int, ...], float]:
    if not prob.ops and not prob.measured:
        return tuple(range(prob.nq)), 1.0
    # the optimum is always one of the matrix entries, so search over those
    cand = set()
    used_q = {c for c, _, _ in prob.ops} | {t for _, t, _ in prob.ops}
    if used_q:
        off = prob.r2q[~np.eye(prob.nh, dtype=bool)]
        cand.update(off.tolist())
    if prob.measured:
        cand.update(prob.rro.tolist())
    values = sorted(cand)
    search = _ThresholdSearch(prob, node_limit)

    def probe(t: float) -> tuple[int, ...] | None:
        try:
            return search.feasible(t)
        except SearchLimitError:
            log.warning("max-min search hit its node limit at threshold %.6g; treating it as "
                        "infeasible, so the result is a lower bound on the optimum", t)
            return None

    best = probe(values[0])
    if best is None:
        raise ValueError("no feasible placement found at the lowest threshold")
    # the identity placement is often far better than the first witness on
    # large, regular programs and costs nothing to score
    ident = tuple(range(prob.nq))
    if prob.min_rel(ident) > prob.min_rel(best):
        best = ident
    # lo: index known feasible (what the witness achieves); hi: first index known infeasible
    lo = bisect.bisect_left(values, prob.min_rel(best))
    hi = len(values)
    while hi - lo > 1:
        if hi < len(values) and values[hi] - values[lo] < epsilon:
            break
        mid = (lo + hi) // 2
        witness = probe(values[mid])
        if witness is None:
            hi = mid
        else:
            best = witness
            lo = bisect.bisect_left(values, prob.min_rel(witness))
    return best, prob.min_rel(best)


def map_qubits(profile: InteractionProfile, rm: ReliabilityMatrix,
               objective: MapObjective | str = MapObjective.SUM_LOG, epsilon: float = 1e-6,
               exact_limit: int = 8, node_limit: int = 200_000,
               maxmin_node_limit: int | None = 1_000_000) -> tuple[Mapping, float]:
    """Best placement under ``objective``; returns (mapping, objective value).

    SUM_LOG is exact up to ``exact_limit`` program qubits and a node-limited
    branch-and-bound above. The SUM_LOG score is the log of the product.
    MAX_MIN is exact unless a threshold probe exceeds ``maxmin_node_limit``
    search nodes (a warning is logged); pass None for no limit.
    """
    objective = MapObjective(objective)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    prob = _Problem(profile, rm)
    if prob.nq == 0:
        return Mapping(()), 0.0 if objective is MapObjective.SUM_LOG else 1.0
    if objective is MapObjective.SUM_LOG:
        assign, score = _map_sum_log(prob, exact_limit, node_limit)
    else:
        assign, score = _map_max_min(prob, epsilon, maxmin_node_limit)
    mapping = Mapping(assign)
    mapping.check(prob.nh)
    return mapping, score


def placement_score(profile: InteractionProfile, rm: ReliabilityMatrix, mapping: Mapping,
                    objective: MapObjective | str) -> float:
    return _Problem(profile, rm).score(mapping.assign, MapObjective(objective))
