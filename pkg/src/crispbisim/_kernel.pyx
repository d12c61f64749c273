# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled refinement core.

Same algorithm and scheduling as ``engine.RefinementEngine`` /
``engine.CountingEngine``, on flat integer arrays. Degrees arrive as ranks
1..l (0 means "no edge"), vertices as 0..n-1, labels as 0..L-1.
"""

from libcpp.map cimport map as cmap
from libcpp.vector cimport vector
from cython.operator cimport dereference as deref, preincrement as inc

ctypedef cmap[int, int] DegMap
ctypedef cmap[DegMap, int] SigMap


cdef class _Core:
    cdef int n, L, counting
    # graph
    cdef vector[int] in_ptr, in_edge, e_origin, e_deg, e_be
    # vertices
    cdef vector[int] v_block, v_next, v_prev, v_list
    cdef vector[char] v_processed
    # vertex lists
    cdef vector[int] vl_head, vl_tail, vl_size
    # block-edges
    cdef vector[DegMap] be_counts
    cdef vector[int] be_dep, be_src
    # blocks (per-label arrays are indexed b*L + r)
    cdef vector[int] b_list, b_sb, b_snext, b_sprev
    cdef vector[DegMap] b_dep1, b_dep2
    cdef vector[SigMap] b_sdep
    # super-blocks
    cdef vector[int] sb_first, sb_last, sb_size, sb_vcount, sb_label, sb_next, sb_prev, sb_compound
    # super-partitions, per label
    cdef vector[int] cp_head, cp_tail, sp_head, sp_tail
    # stats
    cdef public long split_calls
    cdef public long max_participation
    cdef public double max_half_ratio
    cdef public long half_violations
    cdef vector[int] participation

    def __init__(self, int n, int L, int[::1] origin, int[::1] label, int[::1] dest,
                 int[::1] deg, int[::1] label_class, bint counting):
        cdef int m = origin.shape[0]
        cdef int i, e, x, r
        self.n = n
        self.L = L
        self.counting = counting
        self.split_calls = 0
        self.max_participation = 0
        self.max_half_ratio = 0.0
        self.half_violations = 0
        self.participation.assign(n * L, 0)

        # incoming edges grouped by (dest, label), edge order preserved
        self.in_ptr.assign(n * L + 1, 0)
        for e in range(m):
            self.in_ptr[dest[e] * L + label[e] + 1] += 1
        for i in range(n * L):
            self.in_ptr[i + 1] += self.in_ptr[i]
        self.in_edge.assign(m, 0)
        cdef vector[int] fill = self.in_ptr
        for e in range(m):
            i = dest[e] * L + label[e]
            self.in_edge[fill[i]] = e
            fill[i] += 1
        self.e_origin.assign(m, 0)
        self.e_deg.assign(m, 0)
        self.e_be.assign(m, 0)
        for e in range(m):
            self.e_origin[e] = origin[e]
            self.e_deg[e] = deg[e]

        # at most n blocks ever exist; reserving avoids re-copying the per-block maps
        self.b_list.reserve(n)
        self.b_dep1.reserve(n)
        self.b_dep2.reserve(n)
        self.b_sdep.reserve(n)
        self.b_sb.reserve(n * L)
        self.b_snext.reserve(n * L)
        self.b_sprev.reserve(n * L)

        self.v_block.assign(n, -1)
        self.v_next.assign(n, -1)
        self.v_prev.assign(n, -1)
        self.v_list.assign(n, -1)
        self.v_processed.assign(n, 0)

        for r in range(L):
            self.cp_head.push_back(-1)
            self.cp_tail.push_back(-1)
            self.sp_head.push_back(-1)
            self.sp_tail.push_back(-1)
        cdef vector[int] msb
        for r in range(L):
            msb.push_back(self._new_super_block(r, n))

        # one block-edge per (x, r), id x*L + r
        cdef DegMap empty
        self.be_counts.assign(n * L, empty)
        self.be_dep.assign(n * L, -1)
        self.be_src.assign(n * L, -1)
        for e in range(m):
            self.e_be[e] = origin[e] * L + label[e]
            self._push(self.e_be[e], deg[e])

        # initial partition, groups numbered by first vertex
        cdef cmap[vector[int], int] groups
        cdef cmap[vector[int], int].iterator it
        cdef vector[int] key
        cdef vector[int] group_list
        cdef DegMap.iterator dit
        cdef int lst
        for x in range(n):
            key.clear()
            key.push_back(label_class[x])
            for r in range(L):
                i = x * L + r
                if counting:
                    key.push_back(<int>self.be_counts[i].size())
                    dit = self.be_counts[i].begin()
                    while dit != self.be_counts[i].end():
                        key.push_back(deref(dit).first)
                        key.push_back(deref(dit).second)
                        inc(dit)
                else:
                    key.push_back(self._max_key(i))
            it = groups.find(key)
            if it == groups.end():
                lst = self._new_list()
                groups[key] = lst
                group_list.push_back(lst)
            else:
                lst = deref(it).second
            self._list_append(lst, x)
        for lst in group_list:
            self._new_block(lst, -1, &msb)

    # -- vertex lists ----------------------------------------------------------

    cdef inline int _new_list(self):
        self.vl_head.push_back(-1)
        self.vl_tail.push_back(-1)
        self.vl_size.push_back(0)
        return <int>self.vl_head.size() - 1

    cdef inline void _list_append(self, int lst, int x):
        cdef int t = self.vl_tail[lst]
        self.v_list[x] = lst
        self.v_next[x] = -1
        self.v_prev[x] = t
        if t == -1:
            self.vl_head[lst] = x
        else:
            self.v_next[t] = x
        self.vl_tail[lst] = x
        self.vl_size[lst] += 1

    cdef inline void _list_remove(self, int x):
        cdef int lst = self.v_list[x]
        cdef int p = self.v_prev[x], q = self.v_next[x]
        if p == -1:
            self.vl_head[lst] = q
        else:
            self.v_next[p] = q
        if q == -1:
            self.vl_tail[lst] = p
        else:
            self.v_prev[q] = p
        self.vl_size[lst] -= 1
        self.v_list[x] = -1

    # -- block-edges ---------------------------------------------------------------

    cdef inline void _push(self, int be, int d):
        self.be_counts[be][d] += 1

    cdef inline void _pop(self, int be, int d):
        cdef DegMap.iterator it = self.be_counts[be].find(d)
        deref(it).second = deref(it).second - 1
        if deref(it).second == 0:
            self.be_counts[be].erase(it)

    cdef inline int _max_key(self, int be):
        if self.be_counts[be].empty():
            return 0
        return deref(self.be_counts[be].rbegin()).first

    cdef inline int _new_block_edge(self, int source):
        cdef DegMap empty
        self.be_counts.push_back(empty)
        self.be_dep.push_back(-1)
        self.be_src.push_back(source)
        return <int>self.be_dep.size() - 1

    # -- super-partitions -------------------------------------------------------------

    cdef inline void _sbl_append(self, int sb, bint compound):
        cdef int r = self.sb_label[sb]
        cdef int t
        self.sb_compound[sb] = compound
        self.sb_next[sb] = -1
        if compound:
            t = self.cp_tail[r]
            self.sb_prev[sb] = t
            if t == -1:
                self.cp_head[r] = sb
            else:
                self.sb_next[t] = sb
            self.cp_tail[r] = sb
        else:
            t = self.sp_tail[r]
            self.sb_prev[sb] = t
            if t == -1:
                self.sp_head[r] = sb
            else:
                self.sb_next[t] = sb
            self.sp_tail[r] = sb

    cdef inline void _sbl_remove(self, int sb):
        cdef int r = self.sb_label[sb]
        cdef int p = self.sb_prev[sb], q = self.sb_next[sb]
        if self.sb_compound[sb]:
            if p == -1:
                self.cp_head[r] = q
            else:
                self.sb_next[p] = q
            if q == -1:
                self.cp_tail[r] = p
            else:
                self.sb_prev[q] = p
        else:
            if p == -1:
                self.sp_head[r] = q
            else:
                self.sb_next[p] = q
            if q == -1:
                self.sp_tail[r] = p
            else:
                self.sb_prev[q] = p

    cdef inline int _new_super_block(self, int r, int vcount):
        cdef int sb = <int>self.sb_first.size()
        self.sb_first.push_back(-1)
        self.sb_last.push_back(-1)
        self.sb_size.push_back(0)
        self.sb_vcount.push_back(vcount)
        self.sb_label.push_back(r)
        self.sb_next.push_back(-1)
        self.sb_prev.push_back(-1)
        self.sb_compound.push_back(0)
        self._sbl_append(sb, False)
        return sb

    cdef inline void _add_block(self, int sb, int b):
        cdef int r = self.sb_label[sb]
        cdef int k = b * self.L + r
        cdef int t = self.sb_last[sb]
        self.b_sb[k] = sb
        self.b_snext[k] = -1
        self.b_sprev[k] = t
        if t == -1:
            self.sb_first[sb] = b
        else:
            self.b_snext[t * self.L + r] = b
        self.sb_last[sb] = b
        self.sb_size[sb] += 1
        if self.sb_size[sb] == 2:
            self._sbl_remove(sb)
            self._sbl_append(sb, True)

    cdef inline void _remove_block(self, int sb, int b):
        cdef int r = self.sb_label[sb]
        cdef int L = self.L
        cdef int k = b * L + r
        cdef int p = self.b_sprev[k], q = self.b_snext[k]
        if p == -1:
            self.sb_first[sb] = q
        else:
            self.b_snext[p * L + r] = q
        if q == -1:
            self.sb_last[sb] = p
        else:
            self.b_sprev[q * L + r] = p
        self.sb_size[sb] -= 1
        if self.sb_size[sb] == 1:
            self._sbl_remove(sb)
            self._sbl_append(sb, False)

    # -- blocks -------------------------------------------------------------------

    cdef int _new_block(self, int lst, int like, vector[int]* initial):
        """New block over vertex list ``lst``, joining the super-blocks of block ``like``."""
        cdef int b = <int>self.b_list.size()
        cdef int r, x, sb
        cdef DegMap empty
        cdef SigMap sempty
        self.b_list.push_back(lst)
        self.b_dep1.push_back(empty)
        self.b_dep2.push_back(empty)
        self.b_sdep.push_back(sempty)
        for r in range(self.L):
            self.b_sb.push_back(-1)
            self.b_snext.push_back(-1)
            self.b_sprev.push_back(-1)
        x = self.vl_head[lst]
        while x != -1:
            self.v_block[x] = b
            x = self.v_next[x]
        for r in range(self.L):
            if like == -1:
                sb = deref(initial)[r]
            else:
                sb = self.b_sb[like * self.L + r]
            self._add_block(sb, b)
        return b

    cdef inline int _block_size(self, int b):
        return self.vl_size[self.b_list[b]]

    # -- main loop ------------------------------------------------------------------

    def run(self):
        cdef int r, Y, Yp, first, second
        cdef bint changed = True
        if self.b_list.size() == 1:
            return
        while changed:
            changed = False
            for r in range(self.L):
                while self.cp_head[r] != -1:
                    Y = self.cp_head[r]
                    first = self.sb_first[Y]
                    second = self.b_snext[first * self.L + r]
                    Yp = second if self._block_size(second) < self._block_size(first) else first
                    self._split(Yp, Y, r)
                    changed = True

    cdef void _split(self, int Yp, int Y, int r):
        cdef vector[int] vyp
        cdef int x = self.vl_head[self.b_list[Yp]]
        cdef int k
        cdef double ratio
        while x != -1:
            vyp.push_back(x)
            x = self.v_next[x]
        ratio = <double>vyp.size() / self.sb_vcount[Y]
        if ratio > 0.5:
            self.half_violations += 1
        if ratio > self.max_half_ratio:
            self.max_half_ratio = ratio
        for x in vyp:
            k = x * self.L + r
            self.participation[k] += 1
            if self.participation[k] > self.max_participation:
                self.max_participation = self.participation[k]

        self._compute_block_edges(vyp, r)
        if self.counting:
            self._s_compute_subblocks(vyp, r)
            self._s_do_splitting(Yp, vyp, Y, r)
        else:
            self._compute_subblocks(vyp, r)
            self._do_splitting(Yp, vyp, Y, r)
        self._clear_auxiliary_info(vyp, r)
        self.split_calls += 1

    cdef void _compute_block_edges(self, vector[int]& vyp, int r):
        cdef int y, i, e, bE, dbE
        for y in vyp:
            for i in range(self.in_ptr[y * self.L + r], self.in_ptr[y * self.L + r + 1]):
                e = self.in_edge[i]
                bE = self.e_be[e]
                if self.be_dep[bE] == -1:
                    dbE = self._new_block_edge(bE)
                    self.be_dep[bE] = dbE
                dbE = self.be_dep[bE]
                self._pop(bE, self.e_deg[e])
                self._push(dbE, self.e_deg[e])

    cdef inline void _move(self, int x, DegMap& pool, int key):
        cdef DegMap.iterator it = pool.find(key)
        cdef int lst
        if it == pool.end():
            lst = self._new_list()
            pool[key] = lst
        else:
            lst = deref(it).second
        self._list_remove(x)
        self._list_append(lst, x)

    cdef void _compute_subblocks(self, vector[int]& vyp, int r):
        cdef int y, i, e, x, bx, bE, d1, d2
        for y in vyp:
            for i in range(self.in_ptr[y * self.L + r], self.in_ptr[y * self.L + r + 1]):
                e = self.in_edge[i]
                x = self.e_origin[e]
                if self.v_processed[x]:
                    continue
                bx = self.v_block[x]
                bE = self.e_be[e]
                d1 = self._max_key(bE)
                d2 = self._max_key(self.be_dep[bE])
                if d1 >= d2:
                    self._move(x, self.b_dep2[bx], d2)
                else:
                    self._move(x, self.b_dep1[bx], d1)
                self.v_processed[x] = 1

    cdef void _split_super_block(self, int Yp, int nyp, int Y, int r):
        cdef int sb
        self._remove_block(Y, Yp)
        self.sb_vcount[Y] -= nyp
        sb = self._new_super_block(r, nyp)
        self._add_block(sb, Yp)

    cdef void _do_splitting(self, int Yp, vector[int]& vyp, int Y, int r):
        cdef int y, i, e, bx, lst
        cdef DegMap.iterator it
        cdef vector[int] pending
        self._split_super_block(Yp, <int>vyp.size(), Y, r)
        for y in vyp:
            for i in range(self.in_ptr[y * self.L + r], self.in_ptr[y * self.L + r + 1]):
                e = self.in_edge[i]
                self.e_be[e] = self.be_dep[self.e_be[e]]
                bx = self.v_block[self.e_origin[e]]
                if self.b_dep1[bx].empty() and self.b_dep2[bx].empty():
                    continue
                if self.vl_size[self.b_list[bx]] == 0:
                    if not self.b_dep1[bx].empty():
                        it = self.b_dep1[bx].begin()
                        self.b_list[bx] = deref(it).second
                        self.b_dep1[bx].erase(it)
                    else:
                        it = self.b_dep2[bx].begin()
                        self.b_list[bx] = deref(it).second
                        self.b_dep2[bx].erase(it)
                # _new_block grows the per-block vectors, so gather first
                pending.clear()
                it = self.b_dep1[bx].begin()
                while it != self.b_dep1[bx].end():
                    pending.push_back(deref(it).second)
                    inc(it)
                it = self.b_dep2[bx].begin()
                while it != self.b_dep2[bx].end():
                    pending.push_back(deref(it).second)
                    inc(it)
                self.b_dep1[bx].clear()
                self.b_dep2[bx].clear()
                for lst in pending:
                    self._new_block(lst, bx, NULL)

    cdef void _s_compute_subblocks(self, vector[int]& vyp, int r):
        cdef int y, i, e, x, bx, lst
        cdef SigMap.iterator it
        for y in vyp:
            for i in range(self.in_ptr[y * self.L + r], self.in_ptr[y * self.L + r + 1]):
                e = self.in_edge[i]
                x = self.e_origin[e]
                if self.v_processed[x]:
                    continue
                bx = self.v_block[x]
                it = self.b_sdep[bx].find(self.be_counts[self.e_be[e]])
                if it == self.b_sdep[bx].end():
                    lst = self._new_list()
                    self.b_sdep[bx][self.be_counts[self.e_be[e]]] = lst
                else:
                    lst = deref(it).second
                self._list_remove(x)
                self._list_append(lst, x)
                self.v_processed[x] = 1

    cdef void _s_do_splitting(self, int Yp, vector[int]& vyp, int Y, int r):
        cdef int y, i, e, bx, lst
        cdef SigMap.iterator it
        cdef vector[int] pending
        self._split_super_block(Yp, <int>vyp.size(), Y, r)
        for y in vyp:
            for i in range(self.in_ptr[y * self.L + r], self.in_ptr[y * self.L + r + 1]):
                e = self.in_edge[i]
                self.e_be[e] = self.be_dep[self.e_be[e]]
                bx = self.v_block[self.e_origin[e]]
                if self.b_sdep[bx].empty():
                    continue
                if self.vl_size[self.b_list[bx]] == 0:
                    it = self.b_sdep[bx].begin()
                    self.b_list[bx] = deref(it).second
                    self.b_sdep[bx].erase(it)
                pending.clear()
                it = self.b_sdep[bx].begin()
                while it != self.b_sdep[bx].end():
                    pending.push_back(deref(it).second)
                    inc(it)
                self.b_sdep[bx].clear()
                for lst in pending:
                    self._new_block(lst, bx, NULL)

    cdef void _clear_auxiliary_info(self, vector[int]& vyp, int r):
        cdef int y, i, e, bE, sbE
        for y in vyp:
            for i in range(self.in_ptr[y * self.L + r], self.in_ptr[y * self.L + r + 1]):
                e = self.in_edge[i]
                self.v_processed[self.e_origin[e]] = 0
                bE = self.e_be[e]
                sbE = self.be_src[bE]
                if sbE != -1:
                    self.be_dep[sbE] = -1
                    self.be_src[bE] = -1

    # -- results ---------------------------------------------------------------------

    def block_of(self):
        return [self.v_block[x] for x in range(self.n)]

    @property
    def block_count(self):
        return self.b_list.size()


def refine(int n, int L, origin, label, dest, deg, label_class, bint counting):
    """Run the refinement; returns (block id per vertex, stats dict)."""
    core = _Core(n, L, origin, label, dest, deg, label_class, counting)
    core.run()
    return core.block_of(), {
        "split_calls": core.split_calls,
        "max_participation": core.max_participation,
        "max_half_ratio": core.max_half_ratio,
        "half_violations": core.half_violations,
        "blocks": core.block_count,
    }
