"""Phase 3: exact newform orbits from the phase-2 restricted matrices.

Per level M and Atkin-Lehner sign block, the stored matrices are the good
Hecke operators T_p acting on the doubled block (every eigenform appears
with multiplicity two in modular symbols), modulo several certified
primes.  Orbits are recovered by:

  - exact characteristic polynomials via CRT with Deligne coefficient
    bounds, verified against the bound;
  - canonical splitting over Q: kernels of irreducible-factor evaluations,
    computed per working prime (the subspaces are reductions of the same
    rational subspace, so the refinement is CRT-consistent);
  - a piece is resolved once some T_p charpoly on it is h^2 with h
    irreducible; h has degree = orbit dimension.

Per orbit the output carries LMFDB-style labels (sorted by dimension,
then lexicographically by the trace vector Tr(a_n)), Atkin-Lehner signs
(from the block), and exact a_p charpolys (square root of the doubled
charpoly; bad primes by the standard rules a_p = -lambda_p for p || M,
a_p = 0 for p^2 | M).

Levels outside SET B get pseudo-orbit fixtures: one orbit per sign block,
no charpolys.  Those carry enough information for all genus and
Jacobian-decomposition work.
"""

import json
import math
import os
import sys
import time
from functools import reduce

sys.setrecursionlimit(1000000)

import numpy as np
from sympy import Poly, Symbol, ZZ, factor_list, gcd as sym_gcd

from msgen import factorize as _factorize
import blocks
from gen import charpoly as charpoly_mod, nullspace
from levels import set_a, set_b

HK = os.path.join(os.path.dirname(__file__), "cache", "hk")
OUT = os.path.join(os.path.dirname(__file__), "..", "data", "newforms")

x = Symbol("x")


def letter_code(n):
    """0 -> a, 25 -> z, 26 -> ba (base-26 with digits a..z)."""
    if n == 0:
        return "a"
    s = ""
    while n:
        s = chr(ord("a") + n % 26) + s
        n //= 26
    return s


def crt_lift(residues, mods, bound):
    """Symmetric CRT lift, verified against |value| <= bound."""
    M = reduce(lambda a, b: a * b, mods, 1)
    assert M > 2 * bound, ("insufficient primes", M, bound)
    v = 0
    for r, m in zip(residues, mods):
        Mi = M // m
        v += r * Mi * pow(Mi, -1, m)
    v %= M
    if v > M // 2:
        v -= M
    assert abs(v) <= bound, ("CRT bound violated", v, bound)
    return v


def charpoly_exact(mats, ells, p):
    """Exact charpoly (little-endian) of a rational operator given mod
    several primes; eigenvalues bounded by 2 sqrt(p) (Deligne)."""
    deg = mats[ells[0]].shape[0]
    cps = {l: charpoly_mod(mats[l], l) for l in ells}
    B = 2 * math.sqrt(p)
    out = []
    for i in range(deg + 1):
        bound = int(math.comb(deg, deg - i) * B ** (deg - i)) + 1
        out.append(crt_lift([cps[l][i] for l in ells], ells, bound))
    assert out[-1] == 1
    return out


def poly_from_list(coeffs):
    return Poly(list(reversed(coeffs)), x, domain=ZZ)


def sqrt_poly(coeffs):
    """Exact square root of a monic polynomial given little-endian."""
    P = poly_from_list(coeffs)
    _, sq = P.sqf_list()
    h = Poly(1, x, domain=ZZ)
    for f, m in sq:
        assert m % 2 == 0, ("not a square", coeffs)
        h *= f ** (m // 2)
    assert h ** 2 == P
    return [int(c) for c in reversed(h.all_coeffs())]


def eval_poly_mod(coeffs, A, ell):
    """coeffs(A) mod ell, little-endian coeffs, Horner."""
    n = A.shape[0]
    R = np.zeros((n, n))
    for c in reversed(coeffs):
        R = np.mod(R @ A + (c % ell) * np.eye(n), ell)
    return R


def solve_small(U, B, ell):
    from run_hecke import solve_in_basis
    return solve_in_basis(U, B, ell)


class Piece:
    """A rational T_p-stable subspace of a doubled block, tracked mod
    every working prime simultaneously."""

    def __init__(self, mats):
        # mats[ell][p] = matrix of T_p on the piece mod ell
        self.mats = mats
        self.dim = next(iter(mats.values()))[next(iter(next(iter(mats.values()))))].shape[0] if mats else 0

    @classmethod
    def full(cls, level, meta, arrays, block_idx):
        mats = {}
        for l in meta["primes"]:
            mats[l] = {p: arrays["l%d_b%d_p%d" % (l, block_idx, p)].astype(np.float64) % l
                       for p in meta["hecke_ps"]}
        return cls(mats)

    def split(self, p, ells):
        """Split along the Q-irreducible factors of charpoly(T_p).
        Returns list of (piece, resolved_h or None)."""
        cp = charpoly_exact({l: self.mats[l][p] for l in ells}, ells, p)
        P = poly_from_list(cp)
        _, sq = P.sqf_list()
        factors = []
        for f, m in sq:
            for g, _ in factor_list(f)[1]:
                factors.append((g, m))
        if len(factors) == 1:
            g, m = factors[0]
            if m == 2:
                h = (g ** 1).all_coeffs()
                return [(self, [int(c) for c in reversed(h)])]
            return [(self, None)]
        out = []
        for g, m in factors:
            gl = [int(c) for c in reversed(g.all_coeffs())]
            sub = {}
            kdim = None
            for l in ells:
                K = nullspace(eval_poly_mod(gl, self.mats[l][p], l), l).T  # cols
                if kdim is None:
                    kdim = K.shape[1]
                assert K.shape[1] == kdim, ("kernel dim mismatch", kdim, K.shape)
                sub[l] = {q: solve_small(K, np.mod(self.mats[l][q] @ K, l), l)
                          for q in self.mats[l]}
            piece = Piece(sub)
            assert kdim == m * g.degree()
            out.append((piece, [int(c) for c in reversed(g.all_coeffs())]
                        if m == 2 and True else None))
        # a factor with multiplicity exactly 2 resolves immediately only if
        # the candidate piece really has charpoly g^2; that's guaranteed by
        # the kernel dimension check, so mark those resolved
        res = []
        for (piece, h), (g, m) in zip(out, factors):
            res.append((piece, h if m == 2 else None))
        return res


def split_block(level, meta, arrays, block_idx, dim2):
    """Return list of (orbit_dim, piece, h_by_p) fully resolved orbits."""
    ells = meta["primes"]
    work = [Piece.full(level, meta, arrays, block_idx)]
    done = []
    for p in meta["hecke_ps"]:
        nxt = []
        for piece in work:
            for sub, h in piece.split(p, ells):
                if h is not None:
                    done.append(sub)
                else:
                    nxt.append(sub)
        work = nxt
        if not work:
            break
    assert not work, ("unresolved piece at level", level, block_idx,
                      [pc.dim for pc in work])
    return done


def orbit_record(level, meta, piece, eps):
    ells = meta["primes"]
    d2 = piece.dim
    d = d2 // 2
    rec = {"dim": d, "al_signs": [[int(p), int(s)] for p, s in eps],
           "ap_charpoly": {}}
    for p in meta["hecke_ps"]:
        cp = charpoly_exact({l: piece.mats[l][p] for l in ells}, ells, p)
        rec["ap_charpoly"][str(p)] = sqrt_poly(cp)
    lam = dict(eps)
    for p, a in _factorize(level):
        if a == 1:
            rec["ap_charpoly"][str(p)] = _power_linear(lam[p], d)
        else:
            rec["ap_charpoly"][str(p)] = _power_linear(None, d)
    return rec


def _power_linear(lam, d):
    """(x + lam)^d (a_p = -lambda_p for p || M) or x^d (p^2 | M),
    little-endian."""
    if lam is None:
        return [0] * d + [1]
    P = Poly((x + lam) ** d, x)
    return [int(c) for c in reversed(P.all_coeffs())]


def trace_vector(level, meta, piece, eps, nmax=32):
    """[Tr(a_1), Tr(a_2), ...] for sorting, over n composed of available
    primes; unavailable n are skipped (consistently within a level)."""
    ells = meta["primes"]
    d2 = piece.dim
    lam = dict(eps)
    fac_level = dict(_factorize(level))
    avail = set(meta["hecke_ps"]) | set(fac_level)
    out = [d2 // 2]
    for n in range(2, nmax + 1):
        fac = dict(_factorize(n))
        if any(p not in avail for p in fac):
            continue
        tr = []
        bound = 1
        for p, k in fac.items():
            bound *= (k + 1) * math.sqrt(p) ** k
        bound = int((d2 // 2) * 2 * bound) + 1
        for l in ells:
            A = np.eye(d2)
            for p, k in fac.items():
                A = np.mod(A @ _ap_power(level, piece, l, p, k, lam, fac_level), l)
            tr.append(int(round(np.trace(A))) % l)
        t2 = crt_lift(tr, ells, 2 * bound)
        assert t2 % 2 == 0
        out.append(t2 // 2)
    return out


def _ap_power(level, piece, l, p, k, lam, fac_level):
    d2 = piece.dim
    if p in fac_level:
        if fac_level[p] == 1:
            return pow(-lam[p] % l, k, l) * np.eye(d2)
        return np.zeros((d2, d2))
    Ap = piece.mats[l][p]
    if k == 1:
        return Ap
    # a_{p^k} = a_p a_{p^{k-1}} - p a_{p^{k-2}}
    prev, cur = np.eye(d2), Ap
    for _ in range(k - 1):
        prev, cur = cur, np.mod(Ap @ cur - p * prev, l)
    return cur


def true_orbits(level):
    with open(os.path.join(HK, "%d.meta.json" % level)) as fh:
        meta = json.load(fh)
    if meta["dim_new"] == 0:
        return []
    arrays = dict(np.load(os.path.join(HK, "%d.npz" % level)))
    entries = []
    for j, blk in enumerate(meta["blocks"]):
        eps = tuple((int(p), int(s)) for p, s in blk["eps"])
        pieces = split_block(level, meta, arrays, j, blk["dim"])
        assert sum(pc.dim for pc in pieces) == blk["dim"]
        for pc in pieces:
            rec = orbit_record(level, meta, pc, eps)
            tv = trace_vector(level, meta, pc, eps)
            entries.append((tv, rec))
    entries.sort(key=lambda e: (e[1]["dim"], e[0]))
    tvs = [tv for tv, _ in entries]
    assert len(set(map(tuple, tvs))) == len(tvs), ("trace tie", level)
    orbits = []
    for i, (tv, rec) in enumerate(entries):
        rec = {"label": "%d.2.a.%s" % (level, letter_code(i)), **rec}
        orbits.append(rec)
    assert sum(o["dim"] for o in orbits) == meta["dim_new"]
    return orbits


def pseudo_orbits(level):
    out = []
    i = 0
    for eps, d in sorted(blocks.block_dims(level).items(),
                         key=lambda t: (t[1], t[0])):
        out.append({"label": "%d.2.a.%s" % (level, letter_code(i)),
                    "dim": d,
                    "al_signs": [[int(p), int(s)] for p, s in eps],
                    "ap_charpoly": {}})
        i += 1
    return out


def run():
    os.makedirs(OUT, exist_ok=True)
    setb = set(set_b())
    todo = set_a()
    t0 = time.time()
    for k, M in enumerate(todo):
        path = os.path.join(OUT, "%d.json" % M)
        if os.path.exists(path):
            continue
        if M in setb and os.path.exists(os.path.join(HK, "%d.meta.json" % M)):
            try:
                orbits = true_orbits(M)
            except AssertionError as exc:
                print("FAIL level %d: %s" % (M, exc), flush=True)
                continue
            source = "computed:modular-symbols"
        else:
            orbits = pseudo_orbits(M)
            source = "computed:trace-blocks"
        rec = {"level": M, "source": source, "orbits": orbits}
        with open(path + ".tmp", "w") as fh:
            json.dump(rec, fh)
        os.replace(path + ".tmp", path)
        if k % 50 == 0:
            print("[%6.0fs] %d/%d level %d" % (time.time() - t0, k + 1,
                                               len(todo), M), flush=True)
    print("phase 3 complete")


if __name__ == "__main__":
    run()
