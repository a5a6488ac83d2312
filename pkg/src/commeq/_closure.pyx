# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled subpower closure; see ``_closure_py`` for the contract."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, realloc, calloc, free
from libc.string cimport memcmp, memcpy
from libc.stdint cimport int32_t, int64_t, uint32_t, uint64_t

cnp.import_array()


cdef inline uint64_t _row_hash(const int32_t* row, int k) nogil:
    cdef uint64_t h = 1469598103934665603ULL
    cdef int c
    for c in range(k):
        h ^= <uint64_t>(<uint32_t>row[c])
        h *= 1099511628211ULL
        h ^= h >> 29
    return h



cdef struct Store:
    int32_t* elems
    int64_t* parents
    int64_t* slots
    int64_t count
    int64_t cap
    int64_t nslots
    int k
    int width


cdef int _grow(Store* s) nogil:
    cdef int64_t newcap = s.cap * 2
    cdef int32_t* e = <int32_t*>realloc(s.elems, newcap * s.k * sizeof(int32_t))
    if e == NULL:
        return -1
    s.elems = e
    cdef int64_t* p = <int64_t*>realloc(s.parents, newcap * s.width * sizeof(int64_t))
    if p == NULL:
        return -1
    s.parents = p
    s.cap = newcap
    return 0


cdef int _rehash(Store* s) nogil:
    cdef int64_t newn = s.nslots * 2
    cdef int64_t* sl = <int64_t*>calloc(newn, sizeof(int64_t))
    if sl == NULL:
        return -1
    cdef int64_t e, pos
    cdef uint64_t mask = newn - 1
    for e in range(s.count):
        pos = <int64_t>(_row_hash(s.elems + e * s.k, s.k) & mask)
        while sl[pos] != 0:
            pos = (pos + 1) & mask
        sl[pos] = e + 1
    free(s.slots)
    s.slots = sl
    s.nslots = newn
    return 0


# returns 0 if present, 1 if inserted, 2 if full, -1 on allocation failure
cdef int _insert(Store* s, const int32_t* row, const int64_t* parent, int plen, int64_t max_elems) nogil:
    cdef uint64_t mask = s.nslots - 1
    cdef int64_t pos = <int64_t>(_row_hash(row, s.k) & mask)
    cdef int64_t slot
    cdef int j
    while True:
        slot = s.slots[pos]
        if slot == 0:
            break
        if memcmp(s.elems + (slot - 1) * s.k, row, s.k * sizeof(int32_t)) == 0:
            return 0
        pos = (pos + 1) & mask
    if s.count >= max_elems:
        return 2
    if s.count == s.cap:
        if _grow(s) < 0:
            return -1
    memcpy(s.elems + s.count * s.k, row, s.k * sizeof(int32_t))
    for j in range(s.width):
        s.parents[s.count * s.width + j] = parent[j] if j < plen else -1
    s.slots[pos] = s.count + 1
    s.count += 1
    if 2 * s.count > s.nslots:
        if _rehash(s) < 0:
            return -1
    return 1


def power_closure(int n, int k, tables, arities, gens, int64_t max_elems, int64_t max_steps=-1):
    cdef cnp.ndarray[int32_t, ndim=2, mode="c"] g = np.ascontiguousarray(
        np.asarray(gens, dtype=np.int32).reshape(-1, k))
    cdef int nops = len(tables)
    cdef cnp.ndarray[int32_t, ndim=1, mode="c"] ar = np.ascontiguousarray(
        np.asarray(list(arities), dtype=np.int32).reshape(-1))
    flat_tables = [np.asarray(t, dtype=np.int32).ravel() for t in tables]
    offs_py = [0]
    total = 0
    for tab_arr in flat_tables:
        total += len(tab_arr)
        offs_py.append(total)
    cdef cnp.ndarray[int32_t, ndim=1, mode="c"] alltab = np.ascontiguousarray(
        np.concatenate(flat_tables).astype(np.int32) if nops else np.zeros(1, dtype=np.int32))
    cdef cnp.ndarray[int64_t, ndim=1, mode="c"] offs = np.asarray(offs_py, dtype=np.int64)

    cdef int maxar = 1
    cdef int f
    for f in range(nops):
        if ar[f] > maxar:
            maxar = ar[f]

    cdef Store s
    s.k = k
    s.width = 1 + maxar
    s.cap = 64
    s.count = 0
    s.nslots = 256
    s.elems = <int32_t*>malloc(s.cap * k * sizeof(int32_t) + 4)
    s.parents = <int64_t*>malloc(s.cap * s.width * sizeof(int64_t))
    s.slots = <int64_t*>calloc(s.nslots, sizeof(int64_t))
    cdef int32_t* tmp = <int32_t*>malloc(k * sizeof(int32_t) + 4)
    cdef int64_t* par = <int64_t*>malloc(s.width * sizeof(int64_t))
    cdef int64_t* args = <int64_t*>malloc(maxar * sizeof(int64_t))
    cdef int64_t* hi = <int64_t*>malloc(maxar * sizeof(int64_t))
    if s.elems == NULL or s.parents == NULL or s.slots == NULL or tmp == NULL \
            or par == NULL or args == NULL or hi == NULL:
        raise MemoryError()

    cdef int complete = 1
    cdef int rc = 0
    cdef int64_t i, idx, gi
    cdef int64_t steps = 0
    cdef int r, p, j, c
    cdef int64_t off
    cdef const int32_t* tab = &alltab[0]
    cdef bint done
    try:
        for gi in range(g.shape[0]):
            par[0] = -1
            par[1] = gi
            rc = _insert(&s, &g[gi, 0], par, 2, max_elems)
            if rc == 2:
                complete = 0
                break
            if rc < 0:
                raise MemoryError()
        if complete:
            for f in range(nops):
                if ar[f] == 0:
                    for c in range(k):
                        tmp[c] = tab[offs[f]]
                    par[0] = -2
                    par[1] = f
                    rc = _insert(&s, tmp, par, 2, max_elems)
                    if rc == 2:
                        complete = 0
                        break
                    if rc < 0:
                        raise MemoryError()
        with nogil:
            i = 0
            while complete and i < s.count:
                for f in range(nops):
                    r = ar[f]
                    if r == 0 or not complete:
                        continue
                    off = offs[f]
                    for p in range(r):
                        if p > 0 and i == 0:
                            continue
                        for j in range(r):
                            args[j] = 0
                            if j < p:
                                hi[j] = i
                            elif j == p:
                                hi[j] = i + 1
                                args[j] = i
                            else:
                                hi[j] = i + 1
                        done = False
                        while not done:
                            steps += 1
                            if max_steps >= 0 and steps > max_steps:
                                complete = 0
                                break
                            for c in range(k):
                                idx = 0
                                for j in range(r):
                                    idx = idx * n + s.elems[args[j] * k + c]
                                tmp[c] = tab[off + idx]
                            par[0] = f
                            for j in range(r):
                                par[1 + j] = args[j]
                            rc = _insert(&s, tmp, par, 1 + r, max_elems)
                            if rc == 2:
                                complete = 0
                                done = True
                                break
                            if rc < 0:
                                complete = -1
                                done = True
                                break
                            # advance odometer over positions other than p
                            j = r - 1
                            while j >= 0:
                                if j == p:
                                    j -= 1
                                    continue
                                args[j] += 1
                                if args[j] < hi[j]:
                                    break
                                args[j] = 0
                                j -= 1
                            if j < 0:
                                done = True
                        if complete != 1:
                            break
                    if complete != 1:
                        break
                i += 1
        if complete == -1:
            raise MemoryError()
        out_e = np.empty((s.count, k), dtype=np.int32)
        out_p = np.empty((s.count, s.width), dtype=np.int64)
        if s.count:
            memcpy(cnp.PyArray_DATA(out_e), s.elems, s.count * k * sizeof(int32_t))
            memcpy(cnp.PyArray_DATA(out_p), s.parents, s.count * s.width * sizeof(int64_t))
        return out_e, out_p, bool(complete)
    finally:
        free(s.elems)
        free(s.parents)
        free(s.slots)
        free(tmp)
        free(par)
        free(args)
        free(hi)
