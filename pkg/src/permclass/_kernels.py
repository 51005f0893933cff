"""
Compiled inner loops for the class engine.

Everything here works on lexicographic ranks (int64) and 0-based letter arrays.
The scan is resumable: ``run_scan`` returns a status code whenever it needs the
Python driver to spill the frontier to disk, refill it, or grow the output
arrays, and picks up where it stopped on the next call. All loop state lives in
the ``state`` vector so a resumed call is indistinguishable from an
uninterrupted one.
"""

import numpy as np
from numba import config, njit, prange

# the bundled TBB is too old for numba; prefer the layers that always work
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

DONE = 0
SPILL = 1
REFILL = 2
OUTFULL = 3

# slots of the state vector
CURSOR = 0      # next rank to test as a component seed
HEAD = 1
TAIL = 2
QLEN = 3
IN_COMP = 4     # 1 while a component is being explored
SIZE = 5
MINR = 6
EVEN = 7
ODD = 8
SINGLETONS = 9
PENDING = 10    # spilled runs on disk that belong to the current component
NOUT = 11
SEED = 12       # >= 0 in single-component mode
NSTATE = 13

PARALLEL_MIN_BATCH = 32


@njit(cache=True)
def unrank_into(r, n, fact, out, pool):
    """Write the permutation of rank r into out; return its inversion parity."""
    for i in range(n):
        pool[i] = i
    m = n
    inv = 0
    for i in range(n):
        f = fact[n - 1 - i]
        d = r // f
        r -= d * f
        out[i] = pool[d]
        inv += d
        for j in range(d, m - 1):
            pool[j] = pool[j + 1]
        m -= 1
    return inv & 1


@njit(cache=True)
def rank_of(q, n, fact):
    r = 0
    for i in range(n - 1):
        a = q[i]
        cnt = 0
        for j in range(i + 1, n):
            if q[j] < a:
                cnt += 1
        r += cnt * fact[n - 1 - i]
    return r


@njit(cache=True)
def expand_one(r, n, combos, c, lookup, pat_codes, pats, fact, perm, pool, q, v, s, out, off):
    """Ranks of all non-identity moves from rank r, written at out[off:].

    Returns (count, parity of r).
    """
    par = unrank_into(r, n, fact, perm, pool)
    npat = pats.shape[0]
    use_lookup = lookup.shape[0] > 0
    cnt = 0
    for i in range(combos.shape[0]):
        for j in range(c):
            v[j] = perm[combos[i, j]]
        code = 0
        for j in range(c - 1):
            d = 0
            a = v[j]
            for l in range(j + 1, c):
                if v[l] < a:
                    d += 1
            code += d * fact[c - 1 - j]
        idx = -1
        if use_lookup:
            idx = lookup[code]
        else:
            for t in range(npat):
                if pat_codes[t] == code:
                    idx = t
                    break
        if idx < 0:
            continue
        for j in range(c):
            s[j] = v[j]
        for j in range(1, c):
            x = s[j]
            l = j - 1
            while l >= 0 and s[l] > x:
                s[l + 1] = s[l]
                l -= 1
            s[l + 1] = x
        for t in range(npat):
            if t == idx:
                continue
            for j in range(n):
                q[j] = perm[j]
            for j in range(c):
                q[combos[i, j]] = s[pats[t, j]]
            out[off + cnt] = rank_of(q, n, fact)
            cnt += 1
    return cnt, par


@njit(cache=True)
def expand_batch_serial(items, nb, n, combos, c, lookup, pat_codes, pats, fact, buf, counts, pars, maxdeg):
    perm = np.empty(n, np.int64)
    pool = np.empty(n, np.int64)
    q = np.empty(n, np.int64)
    v = np.empty(c, np.int64)
    s = np.empty(c, np.int64)
    for b in range(nb):
        cnt, par = expand_one(items[b], n, combos, c, lookup, pat_codes, pats, fact,
                              perm, pool, q, v, s, buf, b * maxdeg)
        counts[b] = cnt
        pars[b] = par


@njit(cache=True, parallel=True)
def expand_batch_parallel(items, nb, n, combos, c, lookup, pat_codes, pats, fact, buf, counts, pars, maxdeg):
    # each item writes only its own slice of buf, so workers never share a slot
    for b in prange(nb):
        perm = np.empty(n, np.int64)
        pool = np.empty(n, np.int64)
        q = np.empty(n, np.int64)
        v = np.empty(c, np.int64)
        s = np.empty(c, np.int64)
        cnt, par = expand_one(items[b], n, combos, c, lookup, pat_codes, pats, fact,
                              perm, pool, q, v, s, buf, b * maxdeg)
        counts[b] = cnt
        pars[b] = par


@njit(cache=True)
def _is_marked(visited, r):
    return (visited[r >> 6] >> (r & 63)) & 1


@njit(cache=True)
def _mark(visited, r):
    visited[r >> 6] |= np.int64(1) << (r & 63)


@njit(cache=True)
def _push(queue, state, r):
    cap = queue.shape[0]
    queue[state[TAIL]] = r
    state[TAIL] = (state[TAIL] + 1) % cap
    state[QLEN] += 1


@njit(cache=True)
def run_scan(n, total, combos, c, lookup, pat_codes, pats, fact, visited, queue, state,
             out_size, out_min, out_even, out_odd, items, buf, counts, pars, maxdeg, parallel):
    """Explore components until done or until the driver must intervene.

    Components are explored breadth-first in FIFO order; the order in which
    candidates are marked depends only on the queue contents, never on the
    number of worker threads.
    """
    cap = queue.shape[0]
    batch = items.shape[0]
    while True:
        qlen = state[QLEN]
        if qlen == 0:
            if state[IN_COMP] == 1:
                if state[PENDING] > 0:
                    return REFILL
                if state[SEED] >= 0:
                    state[IN_COMP] = 0
                    return DONE
                if state[SIZE] == 1:
                    state[SINGLETONS] += 1
                else:
                    k = state[NOUT]
                    if k >= out_size.shape[0]:
                        return OUTFULL
                    out_size[k] = state[SIZE]
                    out_min[k] = state[MINR]
                    out_even[k] = state[EVEN]
                    out_odd[k] = state[ODD]
                    state[NOUT] = k + 1
                state[IN_COMP] = 0
            cur = state[CURSOR]
            while cur < total:
                w = visited[cur >> 6]
                if w == -1:
                    cur = ((cur >> 6) + 1) << 6
                    continue
                if (w >> (cur & 63)) & 1 == 0:
                    break
                cur += 1
            if cur >= total:
                state[CURSOR] = total
                return DONE
            state[CURSOR] = cur + 1
            _mark(visited, cur)
            _push(queue, state, cur)
            state[IN_COMP] = 1
            state[SIZE] = 0
            state[MINR] = cur
            state[EVEN] = 0
            state[ODD] = 0
            continue

        free = cap - qlen
        nb = min(qlen, batch, free // maxdeg)
        if nb == 0:
            return SPILL
        head = state[HEAD]
        for b in range(nb):
            items[b] = queue[head]
            head = (head + 1) % cap
        state[HEAD] = head
        state[QLEN] = qlen - nb

        if parallel and nb >= PARALLEL_MIN_BATCH:
            expand_batch_parallel(items, nb, n, combos, c, lookup, pat_codes, pats, fact,
                                  buf, counts, pars, maxdeg)
        else:
            expand_batch_serial(items, nb, n, combos, c, lookup, pat_codes, pats, fact,
                                buf, counts, pars, maxdeg)

        for b in range(nb):
            r = items[b]
            state[SIZE] += 1
            if r < state[MINR]:
                state[MINR] = r
            if pars[b] == 0:
                state[EVEN] += 1
            else:
                state[ODD] += 1
            base = b * maxdeg
            for j in range(counts[b]):
                nr = buf[base + j]
                if _is_marked(visited, nr) == 0:
                    _mark(visited, nr)
                    _push(queue, state, nr)
