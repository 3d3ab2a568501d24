"""Randomized generic-vanishing trials and the n = 5 Kronecker witness.

A trial draws a random ``m``-dimensional K in ``wedge^2 V`` over GF(p) from
a seeded stream and computes ``dim W_q(V, K)``; the defaults are
``m = 2n - 2`` and ``q = n - 4``.  Reports are JSON lines.
"""

from __future__ import annotations

import json
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

from .errors import PreconditionViolated
from .exactalg import DEFAULT_PRIME, PRNG_ID, Field, kernel_basis, random_subspace
from .koszul import KoszulProblem, dim_Wq
from .multilinear import d3_dual_matrix, exterior_basis, sym_basis

REPORT_KEYS = ("n", "m", "q", "prime", "seed", "dim", "ms", "prng")


@dataclass(frozen=True)
class TrialReport:
    n: int
    m: int
    q: int
    prime: int
    seed: int
    dim: int
    ms: int | None
    prng: str = PRNG_ID

    @property
    def key(self) -> tuple:
        return (self.n, self.m, self.q, self.prime, self.seed, self.prng)

    def to_json(self, timing: bool = True) -> str:
        """One JSON line; with ``timing=False`` the wall time is written as null
        so that reruns are byte-identical."""
        doc = asdict(self)
        if not timing:
            doc["ms"] = None
        return json.dumps({k: doc[k] for k in REPORT_KEYS}, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> TrialReport:
        doc = json.loads(line)
        return cls(**{k: doc[k] for k in REPORT_KEYS})


def balance_identity(n: int, m: int, q: int) -> bool:
    """Source and target of the restricted differential have equal dimension."""
    return m * comb(n + q - 1, q) == n * comb(n + q, q + 1) - comb(n + q + 1, q + 2)


def balanced_cases(n: int) -> list[tuple[int, int]]:
    """The two (m, q) with a square restricted differential: (2n-3, n-3), (2n-2, n-4)."""
    if n < 4:
        raise PreconditionViolated("balanced_cases needs n >= 4")
    cases = [(2 * n - 3, n - 3), (2 * n - 2, n - 4)]
    for m, q in cases:
        if not balance_identity(n, m, q):
            raise AssertionError(f"balance identity fails at n={n}, m={m}, q={q}")
    return cases


def random_problem(n: int, m: int, seed: int, prime: int = DEFAULT_PRIME) -> KoszulProblem:
    return KoszulProblem(n, random_subspace(comb(n, 2), m, Field.GF(prime), seed))


def generic_vanishing_trial(n: int, seed: int, prime: int = DEFAULT_PRIME,
                            m: int | None = None, q: int | None = None,
                            method: str = "auto") -> TrialReport:
    """Draw K of dim m (default 2n-2) and compute dim W_q (default q = n-4)."""
    if n < 4 or (n < 5 and q is None):
        raise PreconditionViolated("generic-vanishing trials need n >= 5")
    m = 2 * n - 2 if m is None else m
    q = n - 4 if q is None else q
    if not 0 <= m <= comb(n, 2) or q < 0:
        raise PreconditionViolated(f"invalid (m, q) = ({m}, {q}) for n = {n}")
    start = time.perf_counter()
    problem = random_problem(n, m, seed, prime)
    dim = dim_Wq(problem, q, method=method)
    ms = int(round((time.perf_counter() - start) * 1000))
    return TrialReport(n, m, q, prime, seed, dim, ms)


def _trial_args(args: tuple) -> TrialReport:
    n, seed, prime, m, q = args
    return generic_vanishing_trial(n, seed, prime, m, q)


def sweep(n_list: Sequence[int], seeds_per_n: int | None = None, q_override: int | None = None,
          m_override: int | None = None, prime: int = DEFAULT_PRIME, jobs: int = 1,
          seeds: Sequence[int] | None = None, done: Iterable[TrialReport] = (),
          on_report=None) -> list[TrialReport]:
    """Run trials for each n and seed (seeds 1..seeds_per_n unless given).

    Trials whose key already appears in ``done`` are not recomputed.  The
    result is ordered by (n, seed) whatever the scheduling.
    """
    if seeds is None:
        seeds = range(1, (seeds_per_n or 0) + 1)
    seeds = list(seeds)
    previous = {r.key: r for r in done}
    todo, results = [], []
    for n in n_list:
        m = 2 * n - 2 if m_override is None else m_override
        q = n - 4 if q_override is None else q_override
        for s in seeds:
            key = (n, m, q, prime, s, PRNG_ID)
            if key in previous:
                results.append(previous[key])
            else:
                todo.append((n, s, prime, m_override, q_override))
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rep in pool.map(_trial_args, todo):
                results.append(rep)
                if on_report:
                    on_report(rep)
    else:
        for args in todo:
            rep = _trial_args(args)
            results.append(rep)
            if on_report:
                on_report(rep)
    return sorted(results, key=lambda r: (r.n, r.seed, r.m, r.q, r.prime))


def summarize(reports: Iterable[TrialReport]) -> dict[int, dict[str, int]]:
    """Per-n minimum, maximum and mode (smallest among ties) of the dims."""
    by_n: dict[int, list[int]] = {}
    for r in reports:
        by_n.setdefault(r.n, []).append(r.dim)
    out = {}
    for n, dims in sorted(by_n.items()):
        counts = Counter(dims)
        top = max(counts.values())
        out[n] = {"count": len(dims), "min": min(dims), "max": max(dims),
                  "mode": min(d for d, c in counts.items() if c == top)}
    return out


def read_reports(path: str | Path) -> list[TrialReport]:
    p = Path(path)
    if not p.exists():
        return []
    return [TrialReport.from_json(line) for line in p.read_text().splitlines() if line.strip()]


def sweep_to_jsonl(path: str | Path, n_list: Sequence[int], seeds: Sequence[int],
                   q_override: int | None = None, m_override: int | None = None,
                   prime: int = DEFAULT_PRIME, jobs: int = 1,
                   timing: bool = True) -> list[TrialReport]:
    """Resumable sweep: finished trials are appended as they complete and the
    file is rewritten in canonical order at the end."""
    path = Path(path)
    done = read_reports(path)
    with open(path, "a") as fh:
        def write(rep: TrialReport) -> None:
            fh.write(rep.to_json(timing) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        reports = sweep(n_list, q_override=q_override, m_override=m_override, prime=prime,
                        jobs=jobs, seeds=seeds, done=done, on_report=write)
    wanted = {r.key for r in reports}
    extra = [r for r in done if r.key not in wanted]
    final = sorted(reports + extra, key=lambda r: (r.n, r.seed, r.m, r.q, r.prime))
    path.write_text("".join(r.to_json(timing) + "\n" for r in final))
    return reports


# Kronecker witness ---------------------------------------------------------

def kronecker_problem(field: Field | None = None) -> KoszulProblem:
    """n = 5 with K^perp spanned by P = e1^e3 + e2^e4 and Q = e1^e4 + e2^e5."""
    field = field or Field.GF()
    ext = exterior_basis(5, 2)
    P = [0] * ext.size
    Q = [0] * ext.size
    P[ext.index_of((0, 2))] = P[ext.index_of((1, 3))] = 1
    Q[ext.index_of((0, 3))] = Q[ext.index_of((1, 4))] = 1
    return KoszulProblem.from_Kperp(5, [P, Q], field)


def kronecker_witness_details(field: Field | None = None) -> dict:
    """Evaluate the pieces of the witness argument; see :func:`kronecker_witness_check`."""
    field = field or Field.GF()
    problem = kronecker_problem(field)
    kp = problem.Kperp
    ext2, ext3 = exterior_basis(5, 2), exterior_basis(5, 3)
    P = [0] * ext2.size
    Q = [0] * ext2.size
    P[ext2.index_of((0, 2))] = P[ext2.index_of((1, 3))] = 1
    Q[ext2.index_of((0, 3))] = Q[ext2.index_of((1, 4))] = 1
    cP, cQ = kp.coordinates(P), kp.coordinates(Q)
    mono = sym_basis(5, 1)
    # witness P (x) e1 + Q (x) e2 in the (basis row, monomial) column layout
    witness = [field.zero] * (kp.dim * mono.size)
    for r in range(kp.dim):
        witness[r * mono.size + mono.index_of_vars((0,))] += cP[r]
        witness[r * mono.size + mono.index_of_vars((1,))] += cQ[r]
    d3 = d3_dual_matrix(5, 1, kp)
    image = d3.apply(witness)
    # e2^e4^e1 + e1^e4^e2 in wedge^3
    s1, i1 = ext3.signed_index((1, 3, 0))
    s2, i2 = ext3.signed_index((0, 3, 1))
    expansion = [0] * ext3.size
    expansion[i1] += s1
    expansion[i2] += s2
    ker = kernel_basis(d3)
    return {"witness_maps_to_zero": not any(image),
            "witness_in_kernel": ker.contains_vector(witness),
            "expansion_identity": not any(expansion),
            "dim_ker_D3": ker.dim,
            "dim_W1": dim_Wq(problem, 1, method="delta2")}


def kronecker_witness_check(field: Field | None = None) -> bool:
    """The syzygy P (x) e1 + Q (x) e2 lies in the kernel of the dual differential
    at q = 1, so W_1 is nonzero for the 8-dimensional K = {P, Q}^perp."""
    d = kronecker_witness_details(field)
    return (d["witness_maps_to_zero"] and d["witness_in_kernel"] and d["expansion_identity"]
            and d["dim_ker_D3"] >= 1 and d["dim_W1"] >= 1)
