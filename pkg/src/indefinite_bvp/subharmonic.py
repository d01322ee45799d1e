"""Subharmonic solutions with prescribed binary codes.

A kT-periodic solution carries one bit per positivity hump of the weight
over [0, kT]; grouping the bits in blocks of m (one block per period)
turns the code into a word over the alphabet {0,1}^m.  Words equivalent
under cyclic rotation by whole blocks describe time translates of the
same orbit, so the subharmonic classes of order k are counted by Lyndon
words of length k over an alphabet of size 2^m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, UnclassifiableError
from .lyndon import Word, lyndon_words
from .shooting import (SearchConfig, adaptive_levels, classify_code,
                       find_periodic_solutions)


@dataclass(frozen=True)
class CodeTarget:
    """Prescribed code for a kT-periodic solution.

    ``word`` lists one bit per positivity hump over [0, kT] (m bits per
    period, first hump first), so len(word) = m*k.  ``canonical`` marks
    the lexicographic minimum among rotations by whole m-blocks.
    """

    k: int
    word: tuple
    canonical: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise DomainError("subharmonic targets need k >= 2")
        if len(self.word) % self.k != 0:
            raise DomainError("word length must be a multiple of k")
        if any(b not in (0, 1) for b in self.word):
            raise DomainError("word entries must be bits")
        if not any(self.word):
            raise DomainError("the all-zero word has no positive solution")

    @property
    def m(self):
        return len(self.word) // self.k

    @property
    def word_string(self):
        return "".join(str(b) for b in self.word)

    def blocks(self):
        """The word as k integer symbols in [0, 2^m)."""
        m = self.m
        out = []
        for j in range(self.k):
            sym = 0
            for b in self.word[j * m:(j + 1) * m]:
                sym = (sym << 1) | b
            out.append(sym)
        return out

    def block_rotations(self):
        """All rotations of the word by whole m-blocks."""
        m = self.m
        w = list(self.word)
        return [tuple(w[j * m:] + w[:j * m]) for j in range(self.k)]


def _blocks_to_bits(symbols, m):
    bits = []
    for sym in symbols:
        bits.extend((sym >> (m - 1 - i)) & 1 for i in range(m))
    return tuple(bits)


def enumerate_class_representatives(m, k):
    """Canonical targets for the subharmonic classes of order k.

    One CodeTarget per Lyndon word of length k over the 2^m-letter block
    alphabet; the list length is the Witt number S_{2^m}(k).
    """
    if m < 1 or k < 2:
        raise DomainError("need m >= 1 and k >= 2")
    out = []
    for w in lyndon_words(2 ** m, k):
        word = _blocks_to_bits(w.symbols, m)
        if not any(word):
            continue  # the all-zero letter word encodes no solution
        out.append(CodeTarget(k, word, canonical=True))
    return out


def minimal_period_multiple(rec, p, tol=None):
    """Smallest divisor l of rec.k with u(t + lT) = u(t) within tol."""
    k = rec.k
    T = p.period
    traj = rec.trajectory
    t0, _ = traj.span
    if tol is None:
        tol = 1e-6 * (1.0 + rec.sup_norm)
    for l in range(1, k + 1):
        if k % l != 0:
            continue
        ts = np.linspace(t0, t0 + (k - l) * T, max(257, 128 * k))
        du = traj.eval(ts + l * T)[:, 0] - traj.eval(ts)[:, 0]
        if float(np.max(np.abs(du))) < tol:
            rec.min_period_multiple = l
            return l
    rec.min_period_multiple = k
    return k


def _coded_records(p, k, sc, levels=None):
    """k-periodic records with codes and minimal periods attached."""
    recs = find_periodic_solutions(p, k, sc)
    if not recs:
        return [], []
    if levels is None:
        levels = adaptive_levels(recs, p)
    r, R = levels
    coded, boundary = [], []
    for rec in recs:
        try:
            classify_code(rec, p, r, R)
        except UnclassifiableError:
            rec.unclassifiable = True
            boundary.append(rec)
            continue
        minimal_period_multiple(rec, p)
        coded.append(rec)
    return coded, boundary


def find_coded_solution(p, tgt, sc=None, levels=None):
    """Record realizing the target word among the k-periodic solutions.

    Searches the fixed points of the k-th iterate of the period map,
    classifies their codes and returns the one matching ``tgt.word``
    (None when absent).  When ``tgt`` is canonical any rotation-equivalent
    code is accepted, since rotations are time translates of one orbit.
    """
    if tgt.m != p.pattern.m:
        raise DomainError("target word does not match the weight pattern")
    sc = sc or SearchConfig()
    coded, _ = _coded_records(p, tgt.k, sc, levels=levels)
    accepted = {tuple(tgt.word)}
    if tgt.canonical:
        accepted.update(tgt.block_rotations())
    for rec in coded:
        if tuple(rec.code) in accepted:
            return rec
    return None


def coded_orbit_segment(p, word, horizon, sc=None, levels=None):
    """Periodic truncation of the bounded solution coded by ``word``.

    The block word is repeated 2*horizon + 1 times and realized as a
    periodic solution of the corresponding multiple of the period; this
    is the finite-horizon content of the coded-solutions construction.
    Returns the record, or None when the search misses the code.
    """
    word = tuple(int(b) for b in word)
    if not any(word):
        raise DomainError("word must be nontrivial")
    m = p.pattern.m
    if len(word) % m != 0:
        raise DomainError("word length must be a multiple of m")
    reps = 2 * int(horizon) + 1
    k = (len(word) // m) * reps
    sc = sc or SearchConfig()
    if k == 1:
        coded, _ = _coded_records(p, 1, sc, levels=levels)
        for rec in coded:
            if tuple(rec.code) == word:
                return rec
        return None
    return find_coded_solution(p, CodeTarget(k, word * reps), sc,
                               levels=levels)
