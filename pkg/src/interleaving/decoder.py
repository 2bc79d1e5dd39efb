"""Erasure sampling, peeling decoder and logical-failure classification.

An erased outcome is replaced by a uniformly random bit, so the error is a
random subset of the erasure.  The peeling decoder grows a spanning forest of
the erased subgraph with a union-find (path halving, union by size) over
erased edges in index order, then repeatedly strips leaves: a lit leaf puts
its forest edge into the correction and passes the syndrome bit on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .noise import DirectionalErasure
from .streams import trial_streams
from .syndrome import SyndromeGraph


class DecodeError(RuntimeError):
    """The syndrome cannot be explained by any error inside the erasure."""


@dataclass(frozen=True)
class TrialOutcome:
    primal_fail: bool
    dual_fail: bool

    @property
    def fail(self) -> bool:
        return self.primal_fail or self.dual_fail


@njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@njit(cache=True)
def _peel(n_vertices, edge_u, edge_v, erased, syndrome):
    n_edges = edge_u.shape[0]
    parent = np.arange(n_vertices)
    size = np.ones(n_vertices, dtype=np.int64)
    degree = np.zeros(n_vertices, dtype=np.int64)
    # xor of incident forest edge ids; equals the last remaining edge at a leaf
    link = np.zeros(n_vertices, dtype=np.int64)
    for e in range(n_edges):
        if not erased[e]:
            continue
        u = edge_u[e]
        v = edge_v[e]
        ru = _find(parent, u)
        rv = _find(parent, v)
        if ru == rv:
            continue
        if size[ru] < size[rv]:
            ru, rv = rv, ru
        parent[rv] = ru
        size[ru] += size[rv]
        degree[u] += 1
        degree[v] += 1
        link[u] ^= e
        link[v] ^= e

    lit = syndrome.copy()
    correction = np.zeros(n_edges, dtype=np.bool_)
    stack = np.empty(n_vertices, dtype=np.int64)
    top = 0
    for v in range(n_vertices):
        if degree[v] == 1:
            stack[top] = v
            top += 1
    while top > 0:
        top -= 1
        v = stack[top]
        if degree[v] != 1:
            continue
        e = link[v]
        w = edge_v[e] if edge_u[e] == v else edge_u[e]
        if lit[v]:
            correction[e] = True
            lit[v] = 0
            lit[w] ^= 1
        degree[v] = 0
        degree[w] -= 1
        link[w] ^= e
        if degree[w] == 1:
            stack[top] = w
            top += 1
    ok = True
    for v in range(n_vertices):
        if lit[v]:
            ok = False
            break
    return correction, ok


@njit(cache=True)
def _syndrome(n_vertices, edge_u, edge_v, error):
    out = np.zeros(n_vertices, dtype=np.uint8)
    for e in range(edge_u.shape[0]):
        if error[e]:
            out[edge_u[e]] ^= 1
            out[edge_v[e]] ^= 1
    return out


@njit(cache=True)
def _decode_trial(n_vertices, edge_u, edge_v, membranes, erased, error):
    syndrome = _syndrome(n_vertices, edge_u, edge_v, error)
    correction, ok = _peel(n_vertices, edge_u, edge_v, erased, syndrome)
    parity = np.zeros(membranes.shape[0], dtype=np.uint8)
    for e in range(edge_u.shape[0]):
        if correction[e] != error[e]:
            for m in range(membranes.shape[0]):
                if membranes[m, e]:
                    parity[m] ^= 1
    return parity, ok


def edge_probabilities(graph: SyndromeGraph, probs) -> np.ndarray:
    if isinstance(probs, DirectionalErasure):
        probs = probs.as_tuple()
    probs = np.asarray(probs, dtype=float)
    if probs.ndim == 0:
        probs = np.repeat(probs, 3)
    if np.any((probs < 0) | (probs > 1)):
        raise ValueError("erasure probabilities must lie in [0, 1]")
    return probs[graph.direction]


def sample_erasure(graph: SyndromeGraph, probs, rng: np.random.Generator) -> np.ndarray:
    return rng.random(graph.n_edges) < edge_probabilities(graph, probs)


def sample_errors(erasure: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    flips = rng.integers(0, 2, size=erasure.shape[0], dtype=np.uint8).astype(bool)
    return erasure & flips


def syndrome_of(graph: SyndromeGraph, error: np.ndarray) -> np.ndarray:
    return _syndrome(graph.n_vertices, graph.edge_u, graph.edge_v, np.asarray(error, dtype=bool))


def peel_decode(graph: SyndromeGraph, erasure: np.ndarray, syndrome: np.ndarray) -> np.ndarray:
    """Correction inside ``erasure`` whose syndrome equals ``syndrome``."""
    correction, ok = _peel(
        graph.n_vertices, graph.edge_u, graph.edge_v,
        np.asarray(erasure, dtype=bool), np.asarray(syndrome, dtype=np.uint8),
    )
    if not ok:
        raise DecodeError("syndrome is not supported on the erased edges")
    return correction


def decode_failure(graph: SyndromeGraph, erasure: np.ndarray, error: np.ndarray) -> bool:
    """Decode the syndrome of ``error`` and report whether the residual is a logical."""
    parity, ok = _decode_trial(graph.n_vertices, graph.edge_u, graph.edge_v,
                               graph.membranes, erasure, error)
    if not ok:
        raise DecodeError("syndrome is not supported on the erased edges")
    return bool(parity.any())


def _graph_fails(graph: SyndromeGraph, p_edge: np.ndarray, rng: np.random.Generator,
                 erasure: np.ndarray | None = None) -> bool:
    if erasure is None:
        erasure = rng.random(graph.n_edges) < p_edge
    error = sample_errors(erasure, rng)
    return decode_failure(graph, erasure, error)


def run_trial(primal: SyndromeGraph, dual: SyndromeGraph, probs, seed=0, *,
              point_id=(), trial: int = 0, correlated: bool = False) -> TrialOutcome:
    """Sample, decode and classify one trial on both syndrome graphs.

    ``correlated`` erases the primal and dual outcome of a fusion together
    instead of independently.
    """
    if primal.d != dual.d:
        raise ValueError("primal and dual graphs come from different block sizes")
    rng_p, rng_d = trial_streams(seed, point_id, trial)
    p_edge = edge_probabilities(primal, probs)
    erasure = rng_p.random(primal.n_edges) < p_edge
    primal_fail = _graph_fails(primal, p_edge, rng_p, erasure)
    dual_fail = _graph_fails(dual, p_edge, rng_d, erasure.copy() if correlated else None)
    return TrialOutcome(primal_fail, dual_fail)


def count_failures(primal: SyndromeGraph, dual: SyndromeGraph, probs, seed: int,
                   point_id, trials: range, correlated: bool = False) -> int:
    """Failures over a range of trial indices of one parameter point."""
    return sum(
        run_trial(primal, dual, probs, seed, point_id=point_id, trial=t,
                  correlated=correlated).fail
        for t in trials
    )
