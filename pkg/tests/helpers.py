"""Shared test oracles: brute-force MAP, codeword solving, tree codes, sphere enumeration."""

import itertools

import numpy as np

from leecodes.ring import RingContext, lee_weight_vec
from leecodes.codes import ParityCheckCode


def enumerate_sphere(ctx: RingContext, n: int, t: int):
    """All vectors in Z_q^n of Lee weight exactly t, by exhaustive enumeration."""
    out = []
    for vec in itertools.product(range(ctx.q), repeat=n):
        if lee_weight_vec(np.array(vec), ctx) == t:
            out.append(vec)
    return out


def brute_map_marginals(code: ParityCheckCode, pmfs: np.ndarray) -> np.ndarray:
    """Exact symbol-wise posterior marginals by summing over all q^n vectors."""
    q, n = code.ctx.q, code.n
    marg = np.zeros((n, q))
    for vec in itertools.product(range(q), repeat=n):
        x = np.array(vec)
        if code.syndrome(x).any():
            continue
        p = float(np.prod([pmfs[i, vec[i]] for i in range(n)]))
        for i in range(n):
            marg[i, vec[i]] += p
    return marg / marg.sum(axis=1, keepdims=True)


def _factor_prime_powers(q: int):
    out = []
    p = 2
    while q > 1:
        if q % p == 0:
            pk = 1
            while q % p == 0:
                pk *= p
                q //= p
            out.append((p, pk))
        p += 1
    return out


def _solve_mod_p(H: np.ndarray, b: np.ndarray, p: int, rng, randomize_free: bool):
    """One solution of H x = b over GF(p), random free variables; None if inconsistent."""
    m, n = H.shape
    A = np.concatenate([H % p, (b % p)[:, None]], axis=1).astype(np.int64)
    piv_of_row = {}
    used = set()
    r = 0
    for col in range(n):
        sel = None
        for rr in range(r, m):
            if A[rr, col] % p:
                sel = rr
                break
        if sel is None:
            continue
        A[[r, sel]] = A[[sel, r]]
        inv = pow(int(A[r, col]), -1, p)
        A[r] = (A[r] * inv) % p
        for rr in range(m):
            if rr != r and A[rr, col]:
                A[rr] = (A[rr] - A[rr, col] * A[r]) % p
        piv_of_row[r] = col
        used.add(col)
        r += 1
        if r == m:
            break
    for rr in range(r, m):
        if A[rr, n] % p:
            return None  # inconsistent
    x = np.zeros(n, dtype=np.int64)
    free = [c for c in range(n) if c not in used]
    for c in free:
        x[c] = rng.integers(0, p) if randomize_free else 0
    for rr, col in piv_of_row.items():
        acc = int(A[rr, n])
        for c in free:
            acc -= int(A[rr, c]) * int(x[c])
        x[col] = acc % p
    return x


def _solve_mod_prime_power(H: np.ndarray, p: int, pk: int, rng):
    """Random solution of H x = 0 mod p^k by GF(p) elimination plus Hensel lifting."""
    n = H.shape[1]
    x = _solve_mod_p(H, np.zeros(H.shape[0], dtype=np.int64), p, rng, randomize_free=True)
    if x is None:
        return None
    mod = p
    while mod < pk:
        resid = ((H @ x) % (mod * p)) // mod
        y = _solve_mod_p(H, -resid, p, rng, randomize_free=False)
        if y is None:
            return None
        x = (x + mod * y) % (mod * p)
        mod *= p
    return x % pk


def solve_codeword(code: ParityCheckCode, rng: np.random.Generator):
    """A random codeword of H x = 0 over Z_q.

    Prime-power factors are solved by GF(p) elimination with Hensel lifting
    and recombined by the Chinese remainder theorem, so composite and
    prime-power moduli (q = 8, 9, 12, ...) all work. Returns None on the
    rare inconsistent lift; callers retry.
    """
    q, m, n = code.ctx.q, code.m, code.n
    H = np.zeros((m, n), dtype=np.int64)
    for i, row in enumerate(code.rows):
        for c, h in row:
            H[i, c] = h
    x = np.zeros(n, dtype=np.int64)
    for p, pk in _factor_prime_powers(q):
        xp = _solve_mod_prime_power(H, p, pk, rng)
        if xp is None:
            return None
        rest = q // pk
        # CRT: x congruent to xp mod p^k, unchanged mod q/p^k
        inv = pow(rest % pk, -1, pk)
        x = (x * 1) % q
        x = (x + rest * ((inv * (xp - x)) % pk)) % q
    if code.syndrome(x).any():
        return None
    return x


def random_codeword_instance(q: int, n: int, v: int, c: int, seed: int,
                             nonzero: bool = False, max_tries: int = 50):
    """(code, codeword) with the code resampled until the solver succeeds."""
    from leecodes.codes import sample_regular_ensemble
    from leecodes.rng import stream_rng
    ctx = RingContext(q)
    for t in range(max_tries):
        rng = stream_rng(seed, t)
        code = sample_regular_ensemble(ctx, n, v, c, rng)
        x = solve_codeword(code, rng)
        if x is None:
            continue
        if nonzero and not x.any():
            continue
        return code, x
    raise RuntimeError(f"no solvable instance found for q={q} ({v},{c})")


def random_tree_code(q: int, n: int, rng: np.random.Generator) -> ParityCheckCode:
    """A random cycle-free code: each check joins distinct components (union-find)."""
    ctx = RingContext(q)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    rows = []
    while True:
        comps = {}
        for vtx in range(n):
            comps.setdefault(find(vtx), []).append(vtx)
        roots = list(comps)
        if len(roots) < 2:
            break
        deg = min(len(roots), int(rng.integers(2, 4)))
        chosen = rng.choice(len(roots), size=deg, replace=False)
        vns = [comps[roots[r]][rng.integers(0, len(comps[roots[r]]))] for r in chosen]
        row = tuple(sorted((int(vv), int(ctx.units[rng.integers(0, len(ctx.units))]))
                           for vv in vns))
        rows.append(row)
        base = find(vns[0])
        for vv in vns[1:]:
            parent[find(vv)] = base
        if rng.random() < 0.3 and len(rows) >= 1:
            break
    return ParityCheckCode(ctx=ctx, m=len(rows), n=n, rows=tuple(rows))


def graph_girth_bruteforce(code: ParityCheckCode) -> int:
    """Shortest Tanner-graph cycle by DFS path enumeration (small graphs only)."""
    adj = [[] for _ in range(code.n + code.m)]
    for i, row in enumerate(code.rows):
        for c, _ in row:
            adj[c].append(code.n + i)
            adj[code.n + i].append(c)
    best = [0]

    def dfs(start, u, visited, depth):
        for w in adj[u]:
            if w == start and depth >= 2:
                if best[0] == 0 or depth + 1 < best[0]:
                    best[0] = depth + 1
            elif w not in visited and w > start:
                visited.add(w)
                dfs(start, w, visited, depth + 1)
                visited.remove(w)

    for s in range(code.n + code.m):
        dfs(s, s, {s}, 0)
    return best[0]
