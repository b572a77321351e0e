"""End-to-end packing pipelines.

All pipelines share one shape: draw per-phase random streams from the run
seed, build a packing phase by phase, and return a :class:`PackingReport`
whose packing has been validated against the host.  A pipeline that cannot
reach its target still returns a valid (partial) packing with
``target_met = False``.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .absorbing import absorb_quadruple, find_absorbing_cycle_for_path, find_absorbing_triple, splice
from .cycles import SHORT_MAX, find_cycle_of_length, hamilton_path_tournament
from .graph import CyclePacking, GraphError, OrientedGraph, induced_subgraph, is_tournament, min_semidegree, normalize_cycle
from .local import improve_packing, reroute
from .nibble import bite, default_schedule, greedy_complete, run_nibble, triangle_hypergraph
from .rng import substream


class PreconditionError(GraphError):
    """A pipeline was called with inputs outside its contract."""


class PartitionError(GraphError):
    """No balanced split found; ``best`` holds the least-violating attempt."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


@dataclass
class PackingConfig:
    c: float = 0.05
    c2: float = 0.5
    gamma: float = 0.9
    max_bites: int = 200
    eps: float = 0.05            # nibble stops once at most eps*n vertices are uncovered
    slack_C: int = 10
    M: int = 12                  # lengths above M count as long
    T: float = 1.0               # one-factor shape constant
    delta: float = 0.1           # long-cycle case split
    beta: float = 0.0            # balanced_partition size margin
    absorb_budget: int = 10_000  # placements per absorbing-triple search
    quad_tries: int = 8          # quadruples tried per absorption round
    fallback_budget: int = 2000  # window solves for stalled absorption
    polish_budget: int = 300     # window solves once at most 3 are uncovered
    max_window: int = 18
    cycle_budget: int = 20_000
    partition_budget: int = 100
    retries: int = 3             # reseeds for long-cycle and prescribed phases
    splice_retries: int = 20
    reroute_budget: int = 200

    def __post_init__(self):
        if not (0 <= self.c < 0.5):
            raise ValueError("c must lie in [0, 1/2)")
        if self.c2 <= 0:
            raise ValueError("c2 must be positive")
        if not (0 < self.gamma <= 1):
            raise ValueError("gamma must lie in (0, 1]")
        if self.slack_C < 0 or self.M < 3:
            raise ValueError("slack_C must be >= 0 and M >= 3")
        if not (0 < self.delta < 1):
            raise ValueError("delta must lie in (0, 1)")


@dataclass
class PackingRequest:
    """Target lengths (``None`` means as many triangles as possible)."""

    lengths: list[int] | None = None
    slack_C: int = 10
    long_threshold_M: int = 12

    def __post_init__(self):
        if self.lengths is not None:
            self.lengths = [int(x) for x in self.lengths]
            if any(x < 3 for x in self.lengths):
                raise PreconditionError("every cycle length must be >= 3")

    def check(self, n: int) -> None:
        if self.lengths is not None and sum(self.lengths) > n:
            raise PreconditionError(f"lengths sum to {sum(self.lengths)} > n = {n}")


@dataclass
class PackingReport:
    instance_sha256: str
    n: int
    command: str
    seed: int
    config: dict
    phases: list[dict]
    cycles: list[list[int]]
    uncovered: list[int]
    wall_ms: float
    target_met: bool
    warnings: list[str] = field(default_factory=list)
    request: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "target met" if self.target_met else "target unmet"

    @property
    def exit_code(self) -> int:
        return 0 if self.target_met else 2

    @property
    def packing(self) -> CyclePacking:
        return CyclePacking(self.n, tuple(tuple(c) for c in self.cycles))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status
        return d

    def deterministic_view(self) -> dict:
        """Everything except wall time (for reproducibility checks)."""
        d = self.to_dict()
        d.pop("wall_ms")
        return d


class _Run:
    """Collects phase records and warnings, possibly under a name prefix."""

    def __init__(self, prefix: str = "", phases=None, warnings=None):
        self.prefix = prefix
        self.phases = [] if phases is None else phases
        self.warnings = [] if warnings is None else warnings

    def phase(self, name: str, **stats):
        self.phases.append({"name": self.prefix + name, **stats})

    def warn(self, msg: str):
        self.warnings.append(self.prefix + msg)

    def sub(self, name: str) -> "_Run":
        return _Run(self.prefix + name + "/", self.phases, self.warnings)


def _report(g, command, seed, config, run, cycles, start, target_met, request=None):
    packing = CyclePacking(g.n, tuple(tuple(c) for c in cycles))
    packing.validate(g)  # pipelines must never emit an invalid packing
    return PackingReport(
        instance_sha256=g.sha256,
        n=g.n,
        command=command,
        seed=int(seed),
        config=asdict(config),
        phases=run.phases,
        cycles=[list(c) for c in packing.cycles],
        uncovered=packing.uncovered,
        wall_ms=(time.perf_counter() - start) * 1000.0,
        target_met=bool(target_met),
        warnings=run.warnings,
        request=request or {},
    )


def _seed_from(rng) -> int:
    return int(rng.integers(0, 2**62))


def _lift(cycles, labels):
    return [normalize_cycle([labels[v] for v in c]) for c in cycles]


def _uncovered(n, cycles):
    covered = {v for c in cycles for v in c}
    return [v for v in range(n) if v not in covered]


def _check_semidegree(g, run, ratio, what):
    need = ratio * g.n
    semi = min_semidegree(g)
    if semi < need:
        run.warn(f"min semidegree {semi} below {what} = {need:.1f}")


# ---------------------------------------------------------------- triangles

def _pack_triangles(g: OrientedGraph, seed: int, cfg: PackingConfig, run: _Run) -> list[tuple[int, ...]]:
    n = g.n
    _check_semidegree(g, run, 0.5 - cfg.c, "(1/2 - c)n")
    if n < 3:
        run.phase("nibble", matching_size=0, uncovered=n, stop_reason="exhausted")
        return []
    h = triangle_hypergraph(g)
    schedule = default_schedule(h, cfg.c2, cfg.gamma, cfg.max_bites)

    # (1) absorbing collection: the first bite
    reserved_ids, _ = bite(h, np.arange(len(h)), schedule[0] if schedule else 0.0,
                           seed=substream(seed, "absorbing_collection"))
    run.phase("absorbing_collection", p=schedule[0] if schedule else 0.0, size=int(len(reserved_ids)),
              expected=cfg.c2 * n / 24)

    # (2) nibble on the rest, then greedy
    trace = run_nibble(h, cfg.eps, schedule[1:], seed=substream(seed, "nibble"), initial=reserved_ids,
                       delta=0.1)
    run.phase("nibble", **trace.summary())
    matching = greedy_complete(h, trace.final_matching, seed=substream(seed, "greedy"))
    cycles = [g.orient_triangle(*map(int, h.edges[e])) for e in matching]
    reserved = {frozenset(map(int, h.edges[e])) for e in reserved_ids}
    run.phase("greedy", matching_size=len(cycles), uncovered=n - 3 * len(cycles))

    # (3) absorption, (4) fallback repacking
    rng = substream(seed, "absorption")
    frng = substream(seed, "fallback")
    before = n - 3 * len(cycles)
    from_reserved = from_packing = window_moves = 0
    fallback_spent = 0
    while True:
        uncovered = _uncovered(n, cycles)
        if len(uncovered) < 4:
            break
        done = False
        for pool_kind in ("reserved", "packing"):
            if pool_kind == "reserved":
                pool = [c for c in cycles if frozenset(c) in reserved]
            else:
                pool = list(cycles)
            if len(pool) < 3:
                continue
            order = [uncovered[i] for i in rng.permutation(len(uncovered))]
            quads = [order[i:i + 4] for i in range(0, len(order) - 3, 4)]
            while len(quads) < cfg.quad_tries:
                quads.append([uncovered[i] for i in rng.choice(len(uncovered), 4, replace=False)])
            for q in quads[:cfg.quad_tries]:
                triple = find_absorbing_triple(g, q, seed=rng, budget=cfg.absorb_budget, pool=pool)
                if triple is None:
                    continue
                new = absorb_quadruple(CyclePacking(n, tuple(cycles)), q, triple, g)
                cycles = list(new.cycles)
                if pool_kind == "reserved":
                    from_reserved += 1
                else:
                    from_packing += 1
                done = True
                break
            if done:
                break
        if done:
            continue
        left = cfg.fallback_budget - fallback_spent
        if left <= 0:
            break
        cycles, moves = improve_packing(g, cycles, 3, frng, budget=min(left, 200),
                                        max_window=cfg.max_window, stop_at=len(uncovered) - 1)
        fallback_spent += min(left, 200)
        window_moves += moves
        if moves == 0 and fallback_spent >= cfg.fallback_budget:
            break
    after = len(_uncovered(n, cycles))
    run.phase("absorption", uncovered_before=before, uncovered_after=after,
              absorptions_reserved=from_reserved, absorptions_fallback=from_packing)

    polish_moves = 0
    if after == 3:
        cycles, polish_moves = improve_packing(g, cycles, 3, substream(seed, "polish"),
                                               budget=cfg.polish_budget, max_window=cfg.max_window,
                                               stop_at=2)
    run.phase("fallback", window_moves=window_moves, polish_moves=polish_moves,
              uncovered=len(_uncovered(n, cycles)))
    return cycles


def pack_triangles(g: OrientedGraph, seed: int = 0, config: PackingConfig | None = None) -> PackingReport:
    """Near-perfect cyclic-triangle packing; target: at most 3 uncovered."""
    cfg = config or PackingConfig()
    start = time.perf_counter()
    run = _Run()
    cycles = _pack_triangles(g, seed, cfg, run)
    return _report(g, "triangles", seed, cfg, run, cycles, start,
                   len(_uncovered(g.n, cycles)) <= 3, {"mode": "triangles"})


# ---------------------------------------------------------------- k-cycles

def _greedy_k(g, k, seed, cfg, count=None, cycles=None):
    rng = substream(seed, "greedy_k")
    cycles = list(cycles or [])
    misses = 0
    while count is None or len(cycles) < count:
        covered = {v for c in cycles for v in c}
        if g.n - len(covered) < k:
            break
        cyc = find_cycle_of_length(g, k, forbidden=covered, seed=_seed_from(rng), budget=cfg.cycle_budget)
        if cyc is None:
            misses += 1
            if misses >= 2:
                break
            continue
        cycles.append(cyc)
    return cycles


def _pack_k(g: OrientedGraph, k: int, seed: int, cfg: PackingConfig, run: _Run,
            count: int | None = None) -> list[tuple[int, ...]]:
    n = g.n
    if count is not None and k * count > n:
        raise PreconditionError(f"{count} cycles of length {k} need more than n = {n} vertices")
    if k == 3 and count is None:
        return _pack_triangles(g, seed, cfg, run)
    cycles = _greedy_k(g, k, seed, cfg, count)
    run.phase("greedy_k", k=k, cycles=len(cycles), uncovered=n - k * len(cycles))
    if count is not None and len(cycles) >= count:
        return cycles[:count]
    if k == 3:
        # count mode fell short: run the full triangle pipeline
        full = _pack_triangles(g, seed, cfg, run.sub("triangles"))
        if len(full) > len(cycles):
            cycles = full
        if len(cycles) >= count:
            return cycles[:count]
    target_uncovered = n - k * count if count is not None else n % k
    rng = substream(seed, "repair_k")
    moves = 0
    if k <= SHORT_MAX:
        window = cfg.max_window if k == 3 else min(cfg.max_window, 12)
        cycles, moves = improve_packing(g, cycles, k, rng, budget=cfg.fallback_budget, max_window=window,
                                        stop_at=target_uncovered)
    missing: list[int] = []
    if count is not None and len(cycles) < count:
        cycles, missing = reroute(g, cycles, [k] * (count - len(cycles)), rng, budget=cfg.reroute_budget)
    run.phase("repair_k", k=k, window_moves=moves, cycles=len(cycles), missing=len(missing),
              uncovered=len(_uncovered(n, cycles)))
    if count is not None:
        cycles = cycles[:count]
    return cycles


def pack_k_cycles(g: OrientedGraph, k: int, seed: int = 0, config: PackingConfig | None = None,
                  count: int | None = None) -> PackingReport:
    """Pack ``k``-cycles; target: at most ``slack_C`` uncovered (or exactly
    ``count`` cycles when given)."""
    if k < 3:
        raise PreconditionError(f"k must be >= 3, got {k}")
    cfg = config or PackingConfig()
    start = time.perf_counter()
    run = _Run()
    _check_semidegree(g, run, 0.5 - cfg.c, "(1/2 - c)n")
    cycles = _pack_k(g, k, seed, cfg, run, count)
    if count is None:
        met = len(_uncovered(g.n, cycles)) <= (3 if k == 3 else max(cfg.slack_C, g.n % k))
    else:
        met = len(cycles) == count
    return _report(g, "k-cycles", seed, cfg, run, cycles, start, met, {"mode": "k-cycles", "k": k, "count": count})


# ---------------------------------------------------------------- partition

def _split_ok(A, S, alpha, tol):
    if len(S) == 0:
        return 0.0
    sub = A[np.ix_(S, S)]
    semi = min(int(sub.sum(axis=1).min()), int(sub.sum(axis=0).min()))
    return semi - (alpha - tol) * len(S)  # >= 0 means the part passes


def balanced_partition(g: OrientedGraph, m: int, tol: float, seed=0, budget: int = 100,
                       beta: float = 0.0) -> tuple[list[int], list[int]]:
    """Random split ``A, B`` with ``|A| = m`` where both sides keep minimum
    semidegree at least ``(alpha - tol)`` times their size, ``alpha`` being
    the host's proportion ``delta0 / n``.  Resamples up to ``budget`` times."""
    n = g.n
    if not (0 <= m <= n):
        raise PreconditionError(f"part size {m} outside 0..{n}")
    if m in (0, n):
        everything = list(range(n))
        return (everything, []) if m == n else ([], everything)
    if not (beta * n < m < (1 - beta) * n):
        raise PreconditionError(f"part size {m} outside ({beta} n, {1 - beta} n)")
    rng = substream(seed, "partition") if not isinstance(seed, np.random.Generator) else seed
    A = g.adjacency_matrix()
    alpha = min_semidegree(g) / n
    best, best_score = None, -math.inf
    for _ in range(max(1, budget)):
        perm = rng.permutation(n)
        S, T = np.sort(perm[:m]), np.sort(perm[m:])
        score = min(_split_ok(A, S, alpha, tol), _split_ok(A, T, alpha, tol))
        if score >= 0:
            return S.tolist(), T.tolist()
        if score > best_score:
            best, best_score = (S.tolist(), T.tolist()), score
    raise PartitionError(f"no balanced split of size {m} found in {budget} attempts", best)


def _partition_best_effort(g, m, tol, rng, budget, run):
    try:
        return balanced_partition(g, m, tol, seed=rng, budget=budget)
    except PartitionError as err:
        run.warn(f"partition at m={m}: {err}; using the best attempt")
        return err.best


# ---------------------------------------------------------------- long cycles

def _lpt_split(lengths):
    I, J, si, sj = [], [], 0, 0
    for L in sorted(lengths, reverse=True):
        if si <= sj:
            I.append(L)
            si += L
        else:
            J.append(L)
            sj += L
    return I, J


def _pack_long(g: OrientedGraph, lengths: list[int], seed: int, cfg: PackingConfig, run: _Run):
    rng = substream(seed, "long_cycles")
    depth_seen = [0]
    failures = [0]

    def case1(verts, lens):
        # shorter cycles one by one, a Hamilton cycle on the residue last
        outside = set(range(g.n)) - set(verts)
        for _attempt in range(cfg.retries):
            used: set[int] = set()
            out = []
            ok = True
            rest = sorted(lens, reverse=True)
            for L in rest[1:] + rest[:1]:
                cyc = find_cycle_of_length(g, L, forbidden=outside | used, seed=_seed_from(rng),
                                           budget=cfg.cycle_budget)
                if cyc is None:
                    ok = False
                    break
                out.append(cyc)
                used.update(cyc)
            if ok:
                return out
        failures[0] += 1
        return out

    def solve(verts, lens, depth):
        depth_seen[0] = max(depth_seen[0], depth)
        size = len(verts)
        if len(lens) == 1 or max(lens) > (1 - cfg.delta / 2) * size:
            return case1(verts, lens)
        I, J = _lpt_split(lens)
        sub, labels = induced_subgraph(g, verts)
        A, B = _partition_best_effort(sub, sum(I), size ** (-1 / 3), rng, cfg.partition_budget, run)
        return solve([labels[v] for v in A], I, depth + 1) + solve([labels[v] for v in B], J, depth + 1)

    cycles = solve(list(range(g.n)), list(lengths), 0) if lengths else []
    run.phase("long_cycles", depth=depth_seen[0], cycles=len(cycles), requested=len(lengths),
              finder_failures=failures[0])
    return cycles, depth_seen[0]


def long_depth_bound(n: int, M: int, delta: float) -> int:
    if n <= M:
        return 0
    return math.ceil(math.log(n / M) / math.log(1 / (1 - delta / 2)))


def pack_long_cycles(g: OrientedGraph, lengths: Sequence[int], seed: int = 0,
                     config: PackingConfig | None = None) -> PackingReport:
    """1-factor with prescribed long lengths (summing to ``n``)."""
    cfg = config or PackingConfig()
    lengths = [int(x) for x in lengths]
    if sum(lengths) != g.n:
        raise PreconditionError(f"lengths sum to {sum(lengths)}, expected n = {g.n}")
    if any(x < 3 for x in lengths):
        raise PreconditionError("every cycle length must be >= 3")
    start = time.perf_counter()
    run = _Run()
    if lengths and min(lengths) < cfg.M:
        run.warn(f"shortest length {min(lengths)} below M = {cfg.M}")
    _check_semidegree(g, run, 3 / 8 + cfg.delta, "(3/8 + delta)n")
    cycles, _ = _pack_long(g, lengths, seed, cfg, run)
    met = Counter(len(c) for c in cycles) == Counter(lengths)
    return _report(g, "long", seed, cfg, run, cycles, start, met, {"mode": "long", "lengths": lengths})


# ---------------------------------------------------------------- prescribed

def _pack_prescribed(g: OrientedGraph, lengths: list[int], seed: int, cfg: PackingConfig, run: _Run):
    n = g.n
    if not lengths:
        run.phase("blocks", blocks=[])
        return []
    rng = substream(seed, "prescribed")
    counts = Counter(lengths)
    short = {k: N for k, N in counts.items() if k <= cfg.M}
    long_lengths = sorted((L for L in lengths if L > cfg.M), reverse=True)

    # rare lengths first, greedily
    rare = [k for k, N in short.items() if N < cfg.c * n / (4 * cfg.M ** 2)]
    rare_long = 0 < sum(long_lengths) < cfg.c * n / 4
    cycles: list[tuple[int, ...]] = []
    missing: list[int] = []
    rare_lengths = sorted([k for k in rare for _ in range(short[k])] + (long_lengths if rare_long else []),
                          reverse=True)
    for L in rare_lengths:
        covered = {v for c in cycles for v in c}
        cyc = find_cycle_of_length(g, L, forbidden=covered, seed=_seed_from(rng), budget=cfg.cycle_budget)
        if cyc is None:
            missing.append(L)
        else:
            cycles.append(cyc)
    for k in rare:
        del short[k]
    if rare_long:
        long_lengths = []
    run.phase("rare", lengths=rare_lengths, placed=len(rare_lengths) - len(missing))

    # block sizes: k*N_k plus an even share of the spare vertices; long block exact
    rest = _uncovered(n, cycles)
    blocks: list[tuple[str, int, int]] = []  # (kind, k, size)
    if long_lengths:
        blocks.append(("long", 0, sum(long_lengths)))
    ks = sorted(short)
    spare = len(rest) - sum(k * short[k] for k in ks) - sum(long_lengths)
    if spare < 0:
        raise PreconditionError("lengths do not fit in the vertices left after the rare phase")
    for i, k in enumerate(ks):
        extra = spare // len(ks) + (1 if i < spare % len(ks) else 0)
        blocks.append(("short", k, k * short[k] + extra))

    current = list(rest)
    assigned: list[list[int]] = []
    for bi, (_, _, size) in enumerate(blocks):
        if bi == len(blocks) - 1 and not (spare and not ks):
            assigned.append(current)
            break
        sub, labels = induced_subgraph(g, current)
        tol = max(len(current), 1) ** (-1 / 3)
        A, B = _partition_best_effort(sub, size, tol, rng, cfg.partition_budget, run)
        assigned.append([labels[v] for v in A])
        current = [labels[v] for v in B]
    run.phase("blocks", blocks=[{"kind": kind, "k": k, "size": len(vs)} for (kind, k, _), vs in zip(blocks, assigned)])

    for (kind, k, _), verts in zip(blocks, assigned):
        sub, labels = induced_subgraph(g, verts)
        bseed = _seed_from(rng)
        if kind == "long":
            got, _ = _pack_long(sub, long_lengths, bseed, cfg, run.sub("long"))
            got = _lift(got, labels)
            want = Counter(long_lengths)
            have = Counter(len(c) for c in got)
            missing.extend((want - have).elements())
        else:
            got = _lift(_pack_k(sub, k, bseed, cfg, run.sub(f"k={k}"), count=short[k]), labels)
            missing.extend([k] * (short[k] - len(got)))
        cycles.extend(got)

    if missing:
        before = len(missing)
        cycles, missing = reroute(g, cycles, missing, substream(seed, "reroute"), budget=cfg.reroute_budget)
        run.phase("reroute", missing_before=before, missing_after=len(missing))
    return cycles


def pack_prescribed(g: OrientedGraph, lengths: Sequence[int], seed: int = 0,
                    config: PackingConfig | None = None) -> PackingReport:
    """Vertex-disjoint cycles of exactly the given lengths
    (``sum(lengths) <= n - slack_C``)."""
    cfg = config or PackingConfig()
    req = PackingRequest(list(lengths), cfg.slack_C, cfg.M)
    if sum(req.lengths) > g.n - cfg.slack_C:
        raise PreconditionError(f"lengths sum to {sum(req.lengths)} > n - slack_C = {g.n - cfg.slack_C}")
    start = time.perf_counter()
    run = _Run()
    _check_semidegree(g, run, 0.5 - cfg.c, "(1/2 - c)n")
    cycles = _pack_prescribed(g, req.lengths, seed, cfg, run)
    met = Counter(len(c) for c in cycles) == Counter(req.lengths)
    return _report(g, "prescribed", seed, cfg, run, cycles, start, met,
                   {"mode": "prescribed", "lengths": req.lengths})


# ---------------------------------------------------------------- 1-factor

def one_factor_shape(lengths: Sequence[int], n: int, M: int, T: float):
    """Pick the base length ``k``: returns ``(k, special, shape_ok)`` where
    ``special`` are the lengths in ``(k, M]``; ``k`` is ``None`` if no length
    has a longer short partner."""
    counts = Counter(lengths)
    best = None
    for k in sorted(x for x in counts if x <= M):
        special = [L for L in lengths if k < L <= M]
        if not special:
            continue
        ok = counts[k] >= T * math.log(n) and len(special) >= T
        key = (ok, counts[k], len(special))
        if best is None or key > best[0]:
            best = (key, k, special)
    if best is None:
        return None, [], False
    return best[1], sorted(best[2]), best[0][0]


def pack_one_factor(g: OrientedGraph, lengths: Sequence[int], seed: int = 0,
                    config: PackingConfig | None = None) -> PackingReport:
    """Spanning family of vertex-disjoint cycles with the given lengths in a tournament."""
    cfg = config or PackingConfig()
    lengths = [int(x) for x in lengths]
    if sum(lengths) != g.n:
        raise PreconditionError(f"lengths sum to {sum(lengths)}, expected n = {g.n}")
    if any(x < 3 for x in lengths):
        raise PreconditionError("every cycle length must be >= 3")
    if not is_tournament(g):
        raise PreconditionError("one-factor packing needs a tournament")
    start = time.perf_counter()
    run = _Run()
    request = {"mode": "one-factor", "lengths": lengths}
    k, special, shape_ok = one_factor_shape(lengths, g.n, cfg.M, cfg.T)
    if not shape_ok:
        run.warn("lengths miss the shape condition (many copies of some k <= M and "
                 "enough lengths in (k, M])")
    inner = PackingConfig(**{**asdict(cfg), "slack_C": 0})
    if k is None:
        cycles = _pack_prescribed(g, lengths, seed, inner, run)
        met = Counter(len(c) for c in cycles) == Counter(lengths)
        return _report(g, "one-factor", seed, cfg, run, cycles, start, met, request)

    counts = Counter(lengths)
    r = min(counts[k], math.ceil(cfg.T * math.log(g.n)))
    leftover = sum(L - k for L in special)
    rng = substream(seed, "one_factor")
    best_cycles: list[tuple[int, ...]] = []
    for attempt in range(cfg.retries):
        # reserve absorbing k-cycles
        reserved = _greedy_k(g, k, _seed_from(rng), cfg, count=len(special) + r)
        if len(reserved) < len(special):
            continue
        res_vs = {v for c in reserved for v in c}
        rest_vs = [v for v in range(g.n) if v not in res_vs]
        remaining = Counter(lengths)
        remaining.subtract(special)
        remaining[k] -= len(reserved) - len(special)
        rest_lengths = sorted(remaining.elements())
        sub, labels = induced_subgraph(g, rest_vs)
        body = _lift(_pack_prescribed(sub, rest_lengths, _seed_from(rng), inner, run.sub(f"attempt{attempt}")),
                     labels)
        run.phase("reserve", attempt=attempt, reserved=len(reserved), body_cycles=len(body))
        cycles = reserved + body
        U = _uncovered(g.n, cycles)
        if Counter(len(c) for c in body) != Counter(rest_lengths) or len(U) != leftover:
            if len(cycles) > len(best_cycles):
                best_cycles = cycles
            continue
        spliced = _splice_leftover(g, cycles, reserved, U, special, k, rng, cfg)
        run.phase("splice", attempt=attempt, ok=spliced is not None)
        if spliced is not None:
            return _report(g, "one-factor", seed, cfg, run, spliced, start,
                           Counter(len(c) for c in spliced) == Counter(lengths), request)
        if len(cycles) > len(best_cycles):
            best_cycles = cycles
    return _report(g, "one-factor", seed, cfg, run, best_cycles, start, False, request)


def _splice_leftover(g, cycles, reserved, U, special, k, rng, cfg):
    """Cover ``U`` by splicing paths of sizes ``L - k`` into ``k``-cycles."""
    reserved_set = set(reserved)
    for _ in range(cfg.splice_retries):
        path = hamilton_path_tournament(g, U, seed=_seed_from(rng))
        order = [special[i] for i in rng.permutation(len(special))]
        current = list(cycles)
        pos = 0
        ok = True
        for L in order:
            seg = path[pos:pos + L - k]
            pos += L - k
            kc = [c for c in current if len(c) == k]
            first = [c for c in kc if c in reserved_set]
            match = find_absorbing_cycle_for_path(g, seg, first, seed=_seed_from(rng))
            if match is None:
                match = find_absorbing_cycle_for_path(g, seg, [c for c in kc if c not in reserved_set],
                                                      seed=_seed_from(rng))
            if match is None:
                ok = False
                break
            current.remove(match.cycle)
            current.append(splice(match, g))
        if ok:
            return current
    return None


PIPELINES = {
    "triangles": pack_triangles,
    "k-cycles": pack_k_cycles,
    "prescribed": pack_prescribed,
    "one-factor": pack_one_factor,
    "long": pack_long_cycles,
}
