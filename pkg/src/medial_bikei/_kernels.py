"""Compiled propagation sweeps over a padded two-block table.

``T[0]`` holds the underbar block and ``T[1]`` the overbar block. Index 0 is
the unknown sentinel: row 0 and column 0 stay zero, so looking up a cell with
an unknown argument yields 0 without branching.

Each sweep fills cells in place (later instances in the same sweep see the
new values) and records unions in ``parent``. Logs:

* ``flog[k] = (block, row, col, value)`` for every cell filled;
* ``mlog[k] = (a, b)`` for every union that joined two classes, ``a < b``;
* ``counts = [fills, merges]``.
"""
from __future__ import annotations

import numpy as np
from numba import njit

AXIOM_IDS = (
    "i", "ii.i", "ii.ii", "ii.iii", "ii.iv",
    "iii.i", "iii.ii", "iii.iii",
    "m.i", "m.ii", "m.iii",
)


@njit(cache=True)
def find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(cache=True)
def union(parent, a, b, mlog, counts):
    ra = find(parent, a)
    rb = find(parent, b)
    if ra == rb:
        return
    if ra < rb:
        parent[rb] = ra
    else:
        parent[ra] = rb
    k = counts[1]
    mlog[k, 0] = min(a, b)
    mlog[k, 1] = max(a, b)
    counts[1] = k + 1


@njit(cache=True)
def _put(T, blk, i, j, v, parent, flog, mlog, counts):
    cur = T[blk, i, j]
    if cur == 0:
        T[blk, i, j] = v
        k = counts[0]
        flog[k, 0] = blk
        flog[k, 1] = i
        flog[k, 2] = j
        flog[k, 3] = v
        counts[0] = k + 1
    elif cur != v:
        union(parent, cur, v, mlog, counts)


@njit(cache=True)
def _eq_cells(T, lb, li, lj, rb, ri, rj, parent, flog, mlog, counts):
    lv = T[lb, li, lj]
    rv = T[rb, ri, rj]
    if lv != 0:
        if rv == 0:
            _put(T, rb, ri, rj, lv, parent, flog, mlog, counts)
        elif lv != rv:
            union(parent, lv, rv, mlog, counts)
    elif rv != 0:
        _put(T, lb, li, lj, rv, parent, flog, mlog, counts)


@njit(cache=True)
def _eq_const(T, lb, li, lj, v, parent, flog, mlog, counts):
    _put(T, lb, li, lj, v, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_i(T, n, parent, flog, mlog, counts):
    for x in range(1, n + 1):
        _eq_cells(T, 0, x, x, 1, x, x, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_ii_i(T, n, parent, flog, mlog, counts):
    # x _ (y ^ x) = x _ y
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            k = T[1, y, x]
            if k != 0:
                _eq_cells(T, 0, x, k, 0, x, y, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_ii_ii(T, n, parent, flog, mlog, counts):
    # x ^ (y _ x) = x ^ y
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            k = T[0, y, x]
            if k != 0:
                _eq_cells(T, 1, x, k, 1, x, y, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_ii_iii(T, n, parent, flog, mlog, counts):
    # (x ^ y) ^ y = x
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            a = T[1, x, y]
            if a != 0:
                _eq_const(T, 1, a, y, x, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_ii_iv(T, n, parent, flog, mlog, counts):
    # (x _ y) _ y = x
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            a = T[0, x, y]
            if a != 0:
                _eq_const(T, 0, a, y, x, parent, flog, mlog, counts)


@njit(cache=True)
def _sweep_exchange(T, n, ab, bb, cb, db, lb, rb, parent, flog, mlog, counts):
    # (x ab y) lb (z bb y) = (x cb z) rb (y db z)
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            a = T[ab, x, y]
            if a == 0:
                continue
            for z in range(1, n + 1):
                b = T[bb, z, y]
                c = T[cb, x, z]
                d = T[db, y, z]
                if b == 0 or c == 0 or d == 0:
                    continue
                _eq_cells(T, lb, a, b, rb, c, d, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_iii_i(T, n, parent, flog, mlog, counts):
    # (x ^ y) ^ (z _ y) = (x ^ z) ^ (y ^ z)
    _sweep_exchange(T, n, 1, 0, 1, 1, 1, 1, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_iii_ii(T, n, parent, flog, mlog, counts):
    # (x ^ y) _ (z ^ y) = (x _ z) ^ (y _ z)
    _sweep_exchange(T, n, 1, 1, 0, 0, 0, 1, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_iii_iii(T, n, parent, flog, mlog, counts):
    # (x _ y) _ (z ^ y) = (x _ z) _ (y _ z)
    _sweep_exchange(T, n, 0, 1, 0, 0, 0, 0, parent, flog, mlog, counts)


@njit(cache=True)
def _sweep_medial(T, n, ab, cb, lb, rb, parent, flog, mlog, counts):
    # (x ab y) lb (z ab w) = (x cb z) rb (y cb w)
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            a = T[ab, x, y]
            if a == 0:
                continue
            for z in range(1, n + 1):
                c = T[cb, x, z]
                if c == 0:
                    continue
                for w in range(1, n + 1):
                    b = T[ab, z, w]
                    d = T[cb, y, w]
                    if b == 0 or d == 0:
                        continue
                    _eq_cells(T, lb, a, b, rb, c, d, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_m_i(T, n, parent, flog, mlog, counts):
    # (x _ y) _ (z _ w) = (x _ z) _ (y _ w)
    _sweep_medial(T, n, 0, 0, 0, 0, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_m_ii(T, n, parent, flog, mlog, counts):
    # (x _ y) ^ (z _ w) = (x ^ z) _ (y ^ w)
    _sweep_medial(T, n, 0, 1, 1, 0, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_m_iii(T, n, parent, flog, mlog, counts):
    # (x ^ y) ^ (z ^ w) = (x ^ z) ^ (y ^ w)
    _sweep_medial(T, n, 1, 1, 1, 1, parent, flog, mlog, counts)


@njit(cache=True)
def sweep_all(T, n, medial, parent, flog, mlog, counts):
    sweep_i(T, n, parent, flog, mlog, counts)
    sweep_ii_i(T, n, parent, flog, mlog, counts)
    sweep_ii_ii(T, n, parent, flog, mlog, counts)
    sweep_ii_iii(T, n, parent, flog, mlog, counts)
    sweep_ii_iv(T, n, parent, flog, mlog, counts)
    sweep_iii_i(T, n, parent, flog, mlog, counts)
    sweep_iii_ii(T, n, parent, flog, mlog, counts)
    sweep_iii_iii(T, n, parent, flog, mlog, counts)
    if medial:
        sweep_m_i(T, n, parent, flog, mlog, counts)
        sweep_m_ii(T, n, parent, flog, mlog, counts)
        sweep_m_iii(T, n, parent, flog, mlog, counts)


def new_logs(n: int):
    """Buffers large enough for one sweep or drain at size ``n``.

    Each unknown cell is filled at most once and each merge drops a class.
    """
    flog = np.zeros((2 * (n + 1) * (n + 1) + 2, 4), dtype=np.int64)
    mlog = np.zeros((n + 2, 2), dtype=np.int64)
    counts = np.zeros(3, dtype=np.int64)
    return flog, mlog, counts


# --- one-step lookahead scores ----------------------------------------------
#
# For every unknown cell c, count the distinct cells that become fillable in
# one step when c is set to a fresh generator N = n + 1. Only instances that
# read c can change, and they fall into two patterns:
#   * c is the only unknown inner cell of one side and the other side is
#     known: the side's top cell, now indexed by N, gets filled;
#   * c is the blocked top cell of one side and the other side's top cell is
#     blocked too: that other top cell gets filled with N.
# Each credited pair is pushed as the key ``zero_id * 2*S*S + filled_id``.

@njit(cache=True)
def _cid(blk, i, j, S):
    return (blk * S + i) * S + j


@njit(cache=True)
def _side(T, S, N, tb, lk, lblk, la, lb, rk, rblk, ra, rb):
    # returns (status, id, descriptor): 0 hopeless, 1 known value,
    # 2 top cell blocked, 3 single inner cell blocked
    lcell = -1
    rcell = -1
    if lk:
        lv = T[lblk, la, lb]
        lcell = _cid(lblk, la, lb, S)
    else:
        lv = la
    if rk:
        rv = T[rblk, ra, rb]
        rcell = _cid(rblk, ra, rb, S)
    else:
        rv = ra
    if lv != 0 and rv != 0:
        v = T[tb, lv, rv]
        if v != 0:
            return 1, v, 0
        return 2, _cid(tb, lv, rv, S), 0
    if lv == 0 and rv == 0:
        if lcell == rcell:
            return 3, lcell, _cid(tb, N, N, S)
        return 0, 0, 0
    if lv == 0:
        return 3, lcell, _cid(tb, N, rv, S)
    return 3, rcell, _cid(tb, lv, N, S)


@njit(cache=True)
def _push(buf, cnt, key):
    if cnt >= buf.shape[0]:
        bigger = np.empty(buf.shape[0] * 2, dtype=np.int64)
        bigger[:cnt] = buf[:cnt]
        buf = bigger
    buf[cnt] = key
    return buf, cnt + 1


@njit(cache=True)
def _credit(cl, xl, dl, cr, xr, dr, M2, buf, cnt):
    if cl == 3 and cr == 1:
        buf, cnt = _push(buf, cnt, xl * M2 + dl)
    elif cr == 3 and cl == 1:
        buf, cnt = _push(buf, cnt, xr * M2 + dr)
    elif cl == 2 and cr == 2:
        if xl != xr:
            buf, cnt = _push(buf, cnt, xl * M2 + xr)
            buf, cnt = _push(buf, cnt, xr * M2 + xl)
    elif cl == 3 and cr == 2 and xl == xr:
        buf, cnt = _push(buf, cnt, xl * M2 + dl)
    elif cr == 3 and cl == 2 and xl == xr:
        buf, cnt = _push(buf, cnt, xr * M2 + dr)
    return buf, cnt


@njit(cache=True)
def lookahead_pairs(T, n, medial):
    S = n + 2
    N = n + 1
    M2 = 2 * S * S
    buf = np.empty(1024, dtype=np.int64)
    cnt = 0
    for x in range(1, n + 1):
        # (i) x _ x = x ^ x
        cl, xl, dl = _side(T, S, N, 0, 0, 0, x, 0, 0, 0, x, 0)
        cr, xr, dr = _side(T, S, N, 1, 0, 0, x, 0, 0, 0, x, 0)
        buf, cnt = _credit(cl, xl, dl, cr, xr, dr, M2, buf, cnt)
    for x in range(1, n + 1):
        for y in range(1, n + 1):
            # (ii.i) x _ (y ^ x) = x _ y
            cl, xl, dl = _side(T, S, N, 0, 0, 0, x, 0, 1, 1, y, x)
            cr, xr, dr = _side(T, S, N, 0, 0, 0, x, 0, 0, 0, y, 0)
            buf, cnt = _credit(cl, xl, dl, cr, xr, dr, M2, buf, cnt)
            # (ii.ii) x ^ (y _ x) = x ^ y
            cl, xl, dl = _side(T, S, N, 1, 0, 0, x, 0, 1, 0, y, x)
            cr, xr, dr = _side(T, S, N, 1, 0, 0, x, 0, 0, 0, y, 0)
            buf, cnt = _credit(cl, xl, dl, cr, xr, dr, M2, buf, cnt)
            # (ii.iii) (x ^ y) ^ y = x
            cl, xl, dl = _side(T, S, N, 1, 1, 1, x, y, 0, 0, y, 0)
            buf, cnt = _credit(cl, xl, dl, 1, x, 0, M2, buf, cnt)
            # (ii.iv) (x _ y) _ y = x
            cl, xl, dl = _side(T, S, N, 0, 1, 0, x, y, 0, 0, y, 0)
            buf, cnt = _credit(cl, xl, dl, 1, x, 0, M2, buf, cnt)
    # exchange laws: (x ab y) lb (z bb y) = (x cb z) rb (y db z)
    for law in range(3):
        if law == 0:
            ab, bb, cb, db, lb, rb = 1, 0, 1, 1, 1, 1
        elif law == 1:
            ab, bb, cb, db, lb, rb = 1, 1, 0, 0, 0, 1
        else:
            ab, bb, cb, db, lb, rb = 0, 1, 0, 0, 0, 0
        for x in range(1, n + 1):
            for y in range(1, n + 1):
                for z in range(1, n + 1):
                    cl, xl, dl = _side(T, S, N, lb, 1, ab, x, y, 1, bb, z, y)
                    if cl == 0:
                        continue
                    cr, xr, dr = _side(T, S, N, rb, 1, cb, x, z, 1, db, y, z)
                    buf, cnt = _credit(cl, xl, dl, cr, xr, dr, M2, buf, cnt)
    if not medial:
        return buf[:cnt], M2
    # medial: (x ab y) lb (z ab w) = (x cb z) rb (y cb w)
    for law in range(3):
        if law == 0:
            ab, cb, lb, rb = 0, 0, 0, 0
        elif law == 1:
            ab, cb, lb, rb = 0, 1, 1, 0
        else:
            ab, cb, lb, rb = 1, 1, 1, 1
        for x in range(1, n + 1):
            for y in range(1, n + 1):
                a = T[ab, x, y]
                for z in range(1, n + 1):
                    c = T[cb, x, z]
                    if a == 0 and c == 0 and not (ab == cb and y == z):
                        continue
                    for w in range(1, n + 1):
                        cl, xl, dl = _side(T, S, N, lb, 1, ab, x, y, 1, ab, z, w)
                        if cl == 0:
                            continue
                        cr, xr, dr = _side(T, S, N, rb, 1, cb, x, z, 1, cb, y, w)
                        buf, cnt = _credit(cl, xl, dl, cr, xr, dr, M2, buf, cnt)
    return buf[:cnt], M2


# --- worklist propagation ----------------------------------------------------
#
# ``visit`` evaluates every axiom instance that reads cell (blk, i, j). Top
# positions are enumerated through column inverses: with the involution
# partner of every known cell filled eagerly, ``ab[x, y] = i`` iff
# ``ab[i, y] = x`` whenever no merge is pending. Missed instances can only
# involve a generator that is about to be merged, and those cells are revisited
# after the merge.
#
# In dry mode nothing is written: cells an instance would fill are appended to
# ``dry`` as ids ``_cid(blk, i, j, S)``.

@njit(cache=True)
def _wput(T, blk, i, j, v, parent, flog, mlog, counts):
    cur = T[blk, i, j]
    if cur == v:
        return
    if cur != 0:
        union(parent, cur, v, mlog, counts)
        return
    T[blk, i, j] = v
    k = counts[0]
    flog[k, 0] = blk
    flog[k, 1] = i
    flog[k, 2] = j
    flog[k, 3] = v
    counts[0] = k + 1
    # involution partner: (v blk j) blk j = i
    cur = T[blk, v, j]
    if cur == 0:
        T[blk, v, j] = i
        k = counts[0]
        flog[k, 0] = blk
        flog[k, 1] = v
        flog[k, 2] = j
        flog[k, 3] = i
        counts[0] = k + 1
    elif cur != i:
        union(parent, cur, i, mlog, counts)


@njit(cache=True)
def _dpush(dbuf, counts, cid):
    k = counts[2]
    if k < dbuf.shape[0]:
        dbuf[k] = cid
    counts[2] = k + 1


@njit(cache=True)
def _weq(T, dry, S, lb, li, lj, rb, ri, rj, parent, flog, mlog, counts, dbuf):
    lv = T[lb, li, lj]
    rv = T[rb, ri, rj]
    if lv != 0 and rv != 0:
        if lv != rv and not dry:
            union(parent, lv, rv, mlog, counts)
    elif lv != 0:
        if dry:
            _dpush(dbuf, counts, _cid(rb, ri, rj, S))
        else:
            _wput(T, rb, ri, rj, lv, parent, flog, mlog, counts)
    elif rv != 0:
        if dry:
            _dpush(dbuf, counts, _cid(lb, li, lj, S))
        else:
            _wput(T, lb, li, lj, rv, parent, flog, mlog, counts)


@njit(cache=True)
def _weqc(T, dry, S, lb, li, lj, v, parent, flog, mlog, counts, dbuf):
    cur = T[lb, li, lj]
    if cur == 0:
        if dry:
            _dpush(dbuf, counts, _cid(lb, li, lj, S))
        else:
            _wput(T, lb, li, lj, v, parent, flog, mlog, counts)
    elif cur != v and not dry:
        union(parent, cur, v, mlog, counts)


@njit(cache=True)
def _inst_ii(T, dry, S, law, x, y, parent, flog, mlog, counts, dbuf):
    if law == 0:
        # x _ (y ^ x) = x _ y
        k = T[1, y, x]
        if k != 0:
            _weq(T, dry, S, 0, x, k, 0, x, y, parent, flog, mlog, counts, dbuf)
    elif law == 1:
        # x ^ (y _ x) = x ^ y
        k = T[0, y, x]
        if k != 0:
            _weq(T, dry, S, 1, x, k, 1, x, y, parent, flog, mlog, counts, dbuf)
    else:
        # (x b y) b y = x with b = law - 2 (over for ii.iii, under for ii.iv)
        b = 1 if law == 2 else 0
        a = T[b, x, y]
        if a != 0:
            _weqc(T, dry, S, b, a, y, x, parent, flog, mlog, counts, dbuf)


@njit(cache=True)
def _inst_x(T, dry, S, ab, bb, cb, db, lb, rb, x, y, z, parent, flog, mlog, counts, dbuf):
    a = T[ab, x, y]
    b = T[bb, z, y]
    c = T[cb, x, z]
    d = T[db, y, z]
    if a != 0 and b != 0 and c != 0 and d != 0:
        _weq(T, dry, S, lb, a, b, rb, c, d, parent, flog, mlog, counts, dbuf)


@njit(cache=True)
def _inst_m(T, dry, S, ab, cb, lb, rb, x, y, z, w, parent, flog, mlog, counts, dbuf):
    a = T[ab, x, y]
    b = T[ab, z, w]
    c = T[cb, x, z]
    d = T[cb, y, w]
    if a != 0 and b != 0 and c != 0 and d != 0:
        _weq(T, dry, S, lb, a, b, rb, c, d, parent, flog, mlog, counts, dbuf)


@njit(cache=True)
def _exchange_params(law):
    if law == 0:
        return 1, 0, 1, 1, 1, 1
    if law == 1:
        return 1, 1, 0, 0, 0, 1
    return 0, 1, 0, 0, 0, 0


@njit(cache=True)
def _medial_params(law):
    if law == 0:
        return 0, 0, 0, 0
    if law == 1:
        return 0, 1, 1, 0
    return 1, 1, 1, 1


@njit(cache=True)
def visit(T, n, blk, i, j, medial, dry, parent, flog, mlog, counts, dbuf):
    S = n + 2
    val = T[blk, i, j]
    # (i)
    if i == j:
        _weq(T, dry, S, 0, i, i, 1, i, i, parent, flog, mlog, counts, dbuf)
    # (ii.i) x _ (y ^ x) = x _ y ; (ii.ii) x ^ (y _ x) = x ^ y
    other = 1 - blk
    _inst_ii(T, dry, S, other, j, i, parent, flog, mlog, counts, dbuf)
    _inst_ii(T, dry, S, blk, i, j, parent, flog, mlog, counts, dbuf)
    y = T[other, j, i]
    if y != 0:
        _inst_ii(T, dry, S, blk, i, y, parent, flog, mlog, counts, dbuf)
    # (ii.iii) / (ii.iv): inner position, then top position (x = val)
    law = 2 if blk == 1 else 3
    _inst_ii(T, dry, S, law, i, j, parent, flog, mlog, counts, dbuf)
    if val != 0 and val <= n:
        _inst_ii(T, dry, S, law, val, j, parent, flog, mlog, counts, dbuf)
    # exchange laws
    for law in range(3):
        ab, bb, cb, db, lb, rb = _exchange_params(law)
        if blk == ab:
            for z in range(1, n + 1):
                _inst_x(T, dry, S, ab, bb, cb, db, lb, rb, i, j, z, parent, flog, mlog, counts, dbuf)
        if blk == bb:
            for x in range(1, n + 1):
                _inst_x(T, dry, S, ab, bb, cb, db, lb, rb, x, j, i, parent, flog, mlog, counts, dbuf)
        if blk == cb:
            for y in range(1, n + 1):
                _inst_x(T, dry, S, ab, bb, cb, db, lb, rb, i, y, j, parent, flog, mlog, counts, dbuf)
        if blk == db:
            for x in range(1, n + 1):
                _inst_x(T, dry, S, ab, bb, cb, db, lb, rb, x, i, j, parent, flog, mlog, counts, dbuf)
        if blk == lb:
            for y in range(1, n + 1):
                x = T[ab, i, y]
                z = T[bb, j, y]
                if x != 0 and z != 0:
                    _inst_x(T, dry, S, ab, bb, cb, db, lb, rb, x, y, z, parent, flog, mlog, counts, dbuf)
        if blk == rb:
            for z in range(1, n + 1):
                x = T[cb, i, z]
                y = T[db, j, z]
                if x != 0 and y != 0:
                    _inst_x(T, dry, S, ab, bb, cb, db, lb, rb, x, y, z, parent, flog, mlog, counts, dbuf)
    if not medial:
        return
    for law in range(3):
        ab, cb, lb, rb = _medial_params(law)
        if blk == ab:
            # as x ab y
            a = val
            for z in range(1, n + 1):
                c = T[cb, i, z]
                if c == 0:
                    continue
                for w in range(1, n + 1):
                    b = T[ab, z, w]
                    d = T[cb, j, w]
                    if b != 0 and d != 0 and T[lb, a, b] != T[rb, c, d]:
                        _weq(T, dry, S, lb, a, b, rb, c, d, parent, flog, mlog, counts, dbuf)
            # as z ab w
            b = val
            for x in range(1, n + 1):
                c = T[cb, x, i]
                if c == 0:
                    continue
                for y in range(1, n + 1):
                    a = T[ab, x, y]
                    d = T[cb, y, j]
                    if a != 0 and d != 0 and T[lb, a, b] != T[rb, c, d]:
                        _weq(T, dry, S, lb, a, b, rb, c, d, parent, flog, mlog, counts, dbuf)
        if blk == cb:
            # as x cb z
            c = val
            for y in range(1, n + 1):
                a = T[ab, i, y]
                if a == 0:
                    continue
                for w in range(1, n + 1):
                    b = T[ab, j, w]
                    d = T[cb, y, w]
                    if b != 0 and d != 0 and T[lb, a, b] != T[rb, c, d]:
                        _weq(T, dry, S, lb, a, b, rb, c, d, parent, flog, mlog, counts, dbuf)
            # as y cb w
            d = val
            for x in range(1, n + 1):
                a = T[ab, x, i]
                if a == 0:
                    continue
                for z in range(1, n + 1):
                    b = T[ab, z, j]
                    c = T[cb, x, z]
                    if b != 0 and c != 0 and T[lb, a, b] != T[rb, c, d]:
                        _weq(T, dry, S, lb, a, b, rb, c, d, parent, flog, mlog, counts, dbuf)
        if blk == lb:
            # as (x ab y) lb (z ab w), with x ab y = i and z ab w = j
            for y in range(1, n + 1):
                x = T[ab, i, y]
                if x == 0:
                    continue
                for w in range(1, n + 1):
                    z = T[ab, j, w]
                    if z == 0:
                        continue
                    c = T[cb, x, z]
                    d = T[cb, y, w]
                    if c != 0 and d != 0 and T[lb, i, j] != T[rb, c, d]:
                        _weq(T, dry, S, lb, i, j, rb, c, d, parent, flog, mlog, counts, dbuf)
        if blk == rb:
            # as (x cb z) rb (y cb w), with x cb z = i and y cb w = j
            for z in range(1, n + 1):
                x = T[cb, i, z]
                if x == 0:
                    continue
                for w in range(1, n + 1):
                    y = T[cb, j, w]
                    if y == 0:
                        continue
                    a = T[ab, x, y]
                    b = T[ab, z, w]
                    if a != 0 and b != 0 and T[lb, a, b] != T[rb, i, j]:
                        _weq(T, dry, S, lb, a, b, rb, i, j, parent, flog, mlog, counts, dbuf)


@njit(cache=True)
def drain(T, n, medial, seeds, parent, flog, mlog, counts, dbuf):
    """Visit ``seeds`` (rows ``blk, i, j``) and then every cell filled meanwhile.

    Returns once no visited instance can fill anything more.
    """
    for k in range(seeds.shape[0]):
        visit(T, n, seeds[k, 0], seeds[k, 1], seeds[k, 2], medial, False,
              parent, flog, mlog, counts, dbuf)
    k = 0
    while k < counts[0]:
        visit(T, n, flog[k, 0], flog[k, 1], flog[k, 2], medial, False,
              parent, flog, mlog, counts, dbuf)
        k += 1


@njit(cache=True)
def dry_scores(T, n, cells, medial, parent, flog, mlog, counts):
    """One-step lookahead score for each unknown cell in ``cells``.

    ``T`` must have room for index ``n + 1``, whose row and column are zero.
    """
    N = n + 1
    out = np.zeros(cells.shape[0], dtype=np.int64)
    dbuf = np.empty(1024, dtype=np.int64)
    for k in range(cells.shape[0]):
        blk, i, j = cells[k, 0], cells[k, 1], cells[k, 2]
        T[blk, i, j] = N
        while True:
            counts[2] = 0
            visit(T, n, blk, i, j, medial, True, parent, flog, mlog, counts, dbuf)
            if counts[2] <= dbuf.shape[0]:
                break
            dbuf = np.empty(dbuf.shape[0] * 4, dtype=np.int64)
        T[blk, i, j] = 0
        m = counts[2]
        if m:
            ids = np.sort(dbuf[:m])
            distinct = 1
            for t in range(1, m):
                if ids[t] != ids[t - 1]:
                    distinct += 1
            out[k] = distinct
    return out
