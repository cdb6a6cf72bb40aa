"""Chain certificates: lower bounds on the ratio from increasing chains.

For times ``t_0 < ... < t_n`` the largest per-link ratio
``|p_i - p_{i-1}|^2 / (t_i - t_{i-1})`` is at least the chain value
``sum_i |p_i - p_{i-1}|^2 / (t_n - t_0)``, with equality exactly when every
link attains the maximum. Any curve through the chain therefore has ratio
at least the chain value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .curves import ParamSample, Point, PolylineCurve, SelfSimilarCurveSpec, dist_sq, point, vertices
from .errors import DomainError
from .rational import fmt, to_rational
from .slr import pair_scan

FULL_DP_LIMIT = 2000


@dataclass(frozen=True)
class Chain:
    nodes: tuple[ParamSample, ...]

    def __post_init__(self):
        nodes = tuple(ParamSample(to_rational(t), point(*p)) for t, p in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 2:
            raise DomainError("a chain needs at least two nodes")
        for a, b in zip(nodes, nodes[1:]):
            if not a.t < b.t:
                raise DomainError(f"chain times not strictly increasing at t={b.t}")

    @classmethod
    def of(cls, *pairs) -> Chain:
        """``Chain.of((t0, (x0, y0)), (t1, (x1, y1)), ...)``."""
        return cls(tuple(pairs))

    def link_ratios(self) -> list[Fraction]:
        return [dist_sq(a.p, b.p) / (b.t - a.t) for a, b in zip(self.nodes, self.nodes[1:])]


@dataclass(frozen=True)
class ChainCertificate:
    chain: Chain
    sum_of_squares: Fraction
    value: Fraction
    indices: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out = {
            "nodes": [{"t": fmt(n.t), "x": fmt(n.p.x), "y": fmt(n.p.y)} for n in self.chain.nodes],
            "sigma": fmt(self.sum_of_squares),
            "value": fmt(self.value),
        }
        if self.indices is not None:
            out["indices"] = list(self.indices)
        return out


def certificate_value(chain: Chain) -> ChainCertificate:
    nodes = chain.nodes
    sigma = sum((dist_sq(a.p, b.p) for a, b in zip(nodes, nodes[1:])), Fraction(0))
    return ChainCertificate(chain, sigma, sigma / (nodes[-1].t - nodes[0].t))


def max_link_ratio(chain: Chain) -> tuple[Fraction, int]:
    """Largest link ratio and the index of the first link attaining it."""
    ratios = chain.link_ratios()
    best = max(ratios)
    return best, ratios.index(best)


def _chain_from_indices(curve: PolylineCurve, idx: Sequence[int]) -> ChainCertificate:
    cert = certificate_value(Chain(tuple(curve.samples[i] for i in idx)))
    return ChainCertificate(cert.chain, cert.sum_of_squares, cert.value, tuple(idx))


def _layered_dp(D: np.ndarray, start: int, links: int):
    """Best squared-length sums from ``start`` with exactly m links, m = 1..links.

    ``D`` holds integer squared distances with entries below or on the
    diagonal set to a large negative sentinel. Returns the list of value
    rows and predecessor rows (indices relative to ``start``).
    """
    sub = D[start:, start:]
    best = sub[0].copy()
    rows, preds = [best], [np.zeros_like(best)]
    for _ in range(links - 1):
        cand = best[:, None] + sub
        pred = cand.argmax(axis=0)
        best = cand[pred, np.arange(len(pred))]
        rows.append(best)
        preds.append(pred)
    return rows, preds


def _full_dp(curve: PolylineCurve, max_nodes: int) -> ChainCertificate:
    X, Y, T, cden, tden = curve.integer_arrays()
    X, Y, T = (np.asarray(a, dtype=np.int64) for a in (X, Y, T))
    n = len(X)
    dx = X[None, :] - X[:, None]
    dy = Y[None, :] - Y[:, None]
    D = dx * dx + dy * dy
    neg = -(1 << 60)
    D[np.tril_indices(n)] = neg
    links = max_nodes - 1
    best_val = None
    best_key = None
    for i in range(n - 1):
        rows, _ = _layered_dp(D, i, links)
        # fewest links wins ties between layers
        stacked = np.stack(rows)
        m_best = stacked.argmax(axis=0)
        sums = stacked[m_best, np.arange(stacked.shape[1])]
        dt = (T[i:] - T[i]).astype(float)
        dt[0] = np.inf
        fr = np.where(sums > 0, sums / dt, 0.0)
        fr[0] = -1.0
        top = fr.max()
        if best_val is not None and top < float(best_val) * (1 - 1e-9):
            continue
        for j in np.flatnonzero(fr >= top * (1 - 1e-9)):
            j = int(j)
            val = Fraction(int(sums[j]), int(T[i + j] - T[i]))
            key = (int(m_best[j]), i, i + j)
            if best_val is None or val > best_val or (val == best_val and key < best_key):
                best_val, best_key = val, key
    m, i, j = best_key
    rows, preds = _layered_dp(D, i, m + 1)
    path = [j - i]
    for layer in range(m, 0, -1):
        path.append(int(preds[layer][path[-1]]))
    path.append(0)
    return _chain_from_indices(curve, [i + k for k in reversed(path)])


def best_chain(curve: PolylineCurve, max_nodes: int = 8, mode: str = "auto") -> ChainCertificate:
    """Strongest chain certificate whose nodes are samples of ``curve``.

    ``mode="full"`` runs a layered dynamic program over every start index
    (best[m][k] = max_l best[m-1][l] + |p_k - p_l|^2), which costs O(n^3)
    and is the default up to ``FULL_DP_LIMIT`` samples. ``mode="pairs"``
    uses the chain inequality directly: no chain beats its best link, so
    the optimum over all chains is attained by a two-node chain and a pair
    scan finds it exactly. Both modes return an optimal certificate.
    """
    if max_nodes < 2:
        raise DomainError("max_nodes must be at least 2")
    if mode == "auto":
        mode = "full" if len(curve) <= FULL_DP_LIMIT else "pairs"
    if mode == "full":
        return _full_dp(curve, max_nodes)
    if mode == "pairs":
        _, i, j = pair_scan(curve)
        return _chain_from_indices(curve, [i, j])
    raise DomainError(f"unknown mode {mode!r}")


# Serialization and verification ----------------------------------------------

def certificate_from_json(data: dict) -> ChainCertificate:
    try:
        nodes = tuple(ParamSample(to_rational(n["t"]), point(n["x"], n["y"]))
                      for n in data["nodes"])
        sigma = to_rational(data["sigma"])
        value = to_rational(data["value"])
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed certificate: {exc}") from exc
    return ChainCertificate(Chain(nodes), sigma, value, tuple(data.get("indices", ())) or None)


@dataclass
class VerificationReport:
    ok: bool
    failures: list[str]
    value: Fraction | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": self.failures,
                "value": fmt(self.value) if self.value is not None else None}


def verify_certificate(cert: ChainCertificate, spec: SelfSimilarCurveSpec, depth: int) -> VerificationReport:
    """Re-check a certificate against ``vertices(spec, depth)``.

    Every node has to be a vertex at that depth, and the declared sigma
    and value have to match an exact recomputation.
    """
    failures: list[str] = []
    try:
        chain = Chain(cert.chain.nodes)
    except DomainError as exc:
        return VerificationReport(False, [str(exc)])
    lookup = {s.t: s.p for s in vertices(spec, depth).samples}
    for k, node in enumerate(chain.nodes):
        p = lookup.get(node.t)
        if p is None:
            failures.append(f"node {k}: t={fmt(node.t)} is not a vertex time at depth {depth}")
        elif p != node.p:
            failures.append(f"node {k}: point ({fmt(node.p.x)}, {fmt(node.p.y)}) is not the vertex "
                            f"({fmt(p.x)}, {fmt(p.y)}) at t={fmt(node.t)}")
    recomputed = certificate_value(chain)
    if recomputed.sum_of_squares != cert.sum_of_squares:
        failures.append(f"sigma declared {fmt(cert.sum_of_squares)}, "
                        f"recomputed {fmt(recomputed.sum_of_squares)}")
    if recomputed.value != cert.value:
        failures.append(f"value declared {fmt(cert.value)}, recomputed {fmt(recomputed.value)}")
    return VerificationReport(not failures, failures, recomputed.value)
