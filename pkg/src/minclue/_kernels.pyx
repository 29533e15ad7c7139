# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: solver core, alternate-completion enumerator and the
hitting-set engine.

Semantics and emission order match minclue._pykernels exactly; that module
is the reference.  Boards up to 16x16 (256 cells) are supported by the
solver; the diff enumerator and the hitting engine work on universes of up
to 128 cells, which covers every shape with a text format.
"""

from libc.stdlib cimport calloc, free
from libc.string cimport memcpy, memset

from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM

BACKEND_NAME = "native"

ctypedef unsigned long long u64
ctypedef unsigned short u16
ctypedef unsigned char u8

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int popcount64(unsigned long long x) {
        return __builtin_popcountll(x);
    }
    #else
    static inline int popcount64(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; ++c; }
        return c;
    }
    #endif
    """
    int popcount64(u64 x) nogil

cdef enum:
    MAX_N = 16
    MAX_CELLS = 256
    MAX_UNITS = 48
    MAX_K = 128
    MAX_DEGREES = 8


# ---------------------------------------------------------------------------
# geometry

cdef struct Geo:
    int n, ncells, R, C
    int row_of[MAX_CELLS]
    int col_of[MAX_CELLS]
    int box_of[MAX_CELLS]
    int unit_cells[MAX_UNITS][MAX_N]


cdef int build_geo(Geo* g, int box_rows, int box_cols) except -1:
    cdef int n = box_rows * box_cols
    if n > MAX_N:
        raise ValueError("side too large for the compiled backend")
    cdef int ncells = n * n
    cdef int c, r, col, b
    cdef int counts[MAX_UNITS]
    memset(counts, 0, sizeof(counts))
    g.n = n
    g.ncells = ncells
    g.R = box_rows
    g.C = box_cols
    for c in range(ncells):
        r = c // n
        col = c % n
        b = (r // box_rows) * box_rows + col // box_cols
        g.row_of[c] = r
        g.col_of[c] = col
        g.box_of[c] = b
        g.unit_cells[r][counts[r]] = c
        counts[r] += 1
        g.unit_cells[n + col][counts[n + col]] = c
        counts[n + col] += 1
        g.unit_cells[2 * n + b][counts[2 * n + b]] = c
        counts[2 * n + b] += 1
    return 0


cdef inline int _bit_length(unsigned int x) noexcept nogil:
    cdef int length = 0
    while x:
        x >>= 1
        length += 1
    return length


cdef inline int _u64_low_index(u64 x) noexcept nogil:
    # index of the lowest set bit; x must be a single-bit mask
    cdef int idx = 0
    while x > 1:
        x >>= 1
        idx += 1
    return idx


cdef inline bint mask_bit(u64 lo, u64 hi, int c) noexcept nogil:
    if c < 64:
        return (lo >> c) & 1
    return (hi >> (c - 64)) & 1


# ---------------------------------------------------------------------------
# solver core

cdef struct Board:
    u16 row_used[MAX_N]
    u16 col_used[MAX_N]
    u16 box_used[MAX_N]
    u8 grid[MAX_CELLS]


cdef int board_init(Geo* geo, Board* b, object cells) except -1:
    cdef int c, d
    memset(b, 0, sizeof(Board))
    for c in range(geo.ncells):
        d = cells[c]
        b.grid[c] = <u8> d
        if d:
            b.row_used[geo.row_of[c]] |= 1u << (d - 1)
            b.col_used[geo.col_of[c]] |= 1u << (d - 1)
            b.box_used[geo.box_of[c]] |= 1u << (d - 1)
    return 0


cdef inline void assign(Geo* geo, Board* b, int c, int d) noexcept nogil:
    cdef unsigned int bit = 1u << (d - 1)
    b.grid[c] = <u8> d
    b.row_used[geo.row_of[c]] |= bit
    b.col_used[geo.col_of[c]] |= bit
    b.box_used[geo.box_of[c]] |= bit


cdef inline unsigned int candidates(Geo* geo, Board* b, int c) noexcept nogil:
    cdef unsigned int full = (1u << geo.n) - 1
    return full & ~(b.row_used[geo.row_of[c]]
                    | b.col_used[geo.col_of[c]]
                    | b.box_used[geo.box_of[c]])


# diff budget for the alternate-completion enumerator; mirrors
# _pykernels._DiffBudget including every structural cut
cdef struct DiffCtx:
    u8 ref[MAX_CELLS]
    int max_diff
    int max_per_digit
    int total
    int deficit
    int per_digit[MAX_N + 1]
    int digit_open[MAX_N + 1]
    int unit_blanks[MAX_UNITS]
    int unit_diffs[MAX_UNITS]
    int open_singles[3]
    u64 mask_lo
    u64 mask_hi


cdef bint diff_note(Geo* geo, DiffCtx* ctx, int c, int d) noexcept nogil:
    cdef int n = geo.n
    cdef int r = ctx.ref[c]
    cdef bint differs = d != r
    cdef int count_before = ctx.per_digit[r]
    cdef int open_before = ctx.digit_open[r]
    cdef int units[3]
    cdef int kind, u, blanks_before, diffs_before, blanks, diffs, bound
    cdef bint was_open, now_open
    ctx.digit_open[r] = open_before - 1
    if differs:
        ctx.total += 1
        if ctx.total > ctx.max_diff:
            return 0
        ctx.per_digit[r] = count_before + 1
        if ctx.per_digit[r] > ctx.max_per_digit:
            return 0
        if count_before < 2:
            ctx.deficit -= 1
        if c < 64:
            ctx.mask_lo |= (<u64> 1) << c
        else:
            ctx.mask_hi |= (<u64> 1) << (c - 64)
    if open_before == 1 and ctx.per_digit[r] < 2:
        return 0
    units[0] = geo.row_of[c]
    units[1] = n + geo.col_of[c]
    units[2] = 2 * n + geo.box_of[c]
    for kind in range(3):
        u = units[kind]
        blanks_before = ctx.unit_blanks[u]
        diffs_before = ctx.unit_diffs[u]
        blanks = blanks_before - 1
        diffs = diffs_before + 1 if differs else diffs_before
        ctx.unit_blanks[u] = blanks
        ctx.unit_diffs[u] = diffs
        if blanks == 0 and diffs == 1:
            return 0
        was_open = diffs_before == 1 and blanks_before > 0
        now_open = diffs == 1 and blanks > 0
        if was_open != now_open:
            ctx.open_singles[kind] += 1 if now_open else -1
    bound = ctx.open_singles[0]
    if ctx.open_singles[1] > bound:
        bound = ctx.open_singles[1]
    if ctx.open_singles[2] > bound:
        bound = ctx.open_singles[2]
    if ctx.deficit > bound:
        bound = ctx.deficit
    if ctx.total + bound > ctx.max_diff:
        return 0
    return 1


cdef int propagate(Geo* geo, Board* b, DiffCtx* ctx) noexcept nogil:
    """Naked + hidden singles to fixpoint; -1 on contradiction or budget
    cut, else the number of remaining blanks."""
    cdef int n = geo.n
    cdef unsigned int full = (1u << n) - 1
    cdef bint changed
    cdef int blanks, c, d, i, u
    cdef unsigned int cand, placed, once, multi, need, singles, low
    while True:
        changed = 0
        blanks = 0
        for c in range(geo.ncells):
            if b.grid[c]:
                continue
            cand = candidates(geo, b, c)
            if cand == 0:
                return -1
            if cand & (cand - 1):
                blanks += 1
            else:
                d = _bit_length(cand)
                assign(geo, b, c, d)
                if ctx != NULL and not diff_note(geo, ctx, c, d):
                    return -1
                changed = 1
        if changed:
            continue
        if blanks == 0:
            return 0
        for u in range(3 * n):
            placed = 0
            once = 0
            multi = 0
            for i in range(n):
                c = geo.unit_cells[u][i]
                d = b.grid[c]
                if d:
                    placed |= 1u << (d - 1)
                else:
                    cand = candidates(geo, b, c)
                    multi |= once & cand
                    once |= cand
            need = full & ~placed
            if need & ~once:
                return -1
            singles = need & once & ~multi
            while singles:
                low = singles & (singles - 1)
                low ^= singles
                singles &= singles - 1
                d = _bit_length(low)
                for i in range(n):
                    c = geo.unit_cells[u][i]
                    if b.grid[c] == 0 and candidates(geo, b, c) & low:
                        assign(geo, b, c, d)
                        if ctx != NULL and not diff_note(geo, ctx, c, d):
                            return -1
                        changed = 1
                        break
        if not changed:
            return blanks


cdef int pick_branch_cell(Geo* geo, Board* b) noexcept nogil:
    cdef int best_c = -1
    cdef int best_count = 1 << 30
    cdef int c, count
    for c in range(geo.ncells):
        if b.grid[c]:
            continue
        count = popcount64(<u64> candidates(geo, b, c))
        if count < best_count:
            best_count = count
            best_c = c
            if count <= 2:
                break
    return best_c


cdef struct CompOut:
    int saved
    u8 first[MAX_CELLS]
    u8 second[MAX_CELLS]


cdef int solve_rec(Geo* geo, Board* b, int limit, CompOut* out) noexcept nogil:
    cdef int blanks = propagate(geo, b, NULL)
    cdef int c, total
    cdef unsigned int cand, low
    cdef Board nb
    if blanks < 0:
        return 0
    if blanks == 0:
        if out.saved == 0:
            memcpy(out.first, b.grid, geo.ncells)
            out.saved = 1
        elif out.saved == 1:
            memcpy(out.second, b.grid, geo.ncells)
            out.saved = 2
        return 1
    c = pick_branch_cell(geo, b)
    total = 0
    cand = candidates(geo, b, c)
    while cand:
        low = cand & (cand - 1)
        low ^= cand
        cand &= cand - 1
        nb = b[0]
        assign(geo, &nb, c, _bit_length(low))
        total += solve_rec(geo, &nb, limit - total, out)
        if total >= limit:
            break
    return total


def solve_limit(int box_rows, int box_cols, cells, int limit):
    """Count completions up to `limit`; return (count, first, second)."""
    cdef Geo geo
    cdef Board board
    cdef CompOut out
    cdef int count, i
    build_geo(&geo, box_rows, box_cols)
    board_init(&geo, &board, cells)
    out.saved = 0
    count = solve_rec(&geo, &board, limit, &out)
    first = second = None
    if out.saved >= 1:
        first = tuple(out.first[i] for i in range(geo.ncells))
    if out.saved >= 2:
        second = tuple(out.second[i] for i in range(geo.ncells))
    return count, first, second


# ---------------------------------------------------------------------------
# alternate-completion enumeration

cdef void diff_rec(Geo* geo, Board* b, DiffCtx* ctx, list out):
    cdef int blanks = propagate(geo, b, ctx)
    cdef int c, d
    cdef unsigned int cand, low
    cdef Board nb
    cdef DiffCtx nctx
    if blanks < 0:
        return
    if blanks == 0:
        if ctx.mask_lo or ctx.mask_hi:
            out.append((<object> ctx.mask_lo) | ((<object> ctx.mask_hi) << 64))
        return
    c = pick_branch_cell(geo, b)
    cand = candidates(geo, b, c)
    while cand:
        low = cand & (cand - 1)
        low ^= cand
        cand &= cand - 1
        d = _bit_length(low)
        nb = b[0]
        nctx = ctx[0]
        assign(geo, &nb, c, d)
        if diff_note(geo, &nctx, c, d):
            diff_rec(geo, &nb, &nctx, out)


def enumerate_diffs(int box_rows, int box_cols, solution, object blank_mask,
                    int max_diff, int max_per_digit):
    """Masks of cells where bounded alternate completions differ from
    `solution`; see the reference backend for the full contract."""
    cdef Geo geo
    build_geo(&geo, box_rows, box_cols)
    if geo.ncells > 128:
        raise ValueError("boards beyond 128 cells are not supported here")
    cdef u64 blank_lo = <u64> (blank_mask & 0xFFFFFFFFFFFFFFFF)
    cdef u64 blank_hi = <u64> (blank_mask >> 64)
    cdef int ncells = geo.ncells
    cdef int n = geo.n
    cdef u8 ref[MAX_CELLS]
    cdef int blank_cells[MAX_CELLS]
    cdef int n_blanks = 0
    cdef int c, d, i, split, c0
    base_cells = []
    for c in range(ncells):
        d = solution[c]
        ref[c] = <u8> d
        if mask_bit(blank_lo, blank_hi, c):
            base_cells.append(0)
            blank_cells[n_blanks] = c
            n_blanks += 1
        else:
            base_cells.append(d)

    cdef DiffCtx proto
    memset(&proto, 0, sizeof(DiffCtx))
    proto.max_diff = max_diff
    proto.max_per_digit = max_per_digit
    memcpy(proto.ref, ref, MAX_CELLS)
    for i in range(n_blanks):
        c = blank_cells[i]
        proto.unit_blanks[geo.row_of[c]] += 1
        proto.unit_blanks[n + geo.col_of[c]] += 1
        proto.unit_blanks[2 * n + geo.box_of[c]] += 1
        proto.digit_open[ref[c]] += 1
    for d in range(1, n + 1):
        if proto.digit_open[d]:
            proto.deficit += 2

    out = []
    cdef Board board, nb
    cdef DiffCtx ctx, nctx
    cdef unsigned int cand, low
    cdef bint pinned_ok
    for split in range(n_blanks):
        c0 = blank_cells[split]
        board_init(&geo, &board, base_cells)
        ctx = proto
        pinned_ok = 1
        for i in range(split):
            c = blank_cells[i]
            assign(&geo, &board, c, ref[c])
            if not diff_note(&geo, &ctx, c, ref[c]):
                pinned_ok = 0
                break
        if not pinned_ok:
            break  # longer pinned prefixes fail at the same cell
        cand = candidates(&geo, &board, c0) & ~(1u << (ref[c0] - 1))
        while cand:
            low = cand & (cand - 1)
            low ^= cand
            cand &= cand - 1
            d = _bit_length(low)
            nb = board
            nctx = ctx
            assign(&geo, &nb, c0, d)
            if diff_note(&geo, &nctx, c0, d):
                diff_rec(&geo, &nb, &nctx, out)
    return out


# ---------------------------------------------------------------------------
# hitting-set engine

cdef struct DegState:
    int degree
    int m_orig            # family size before consolidation
    int words_orig
    u64* table_orig       # hitvec rows: [universe][words_orig]
    u64* masks_orig       # cell masks: [m_orig][2]
    int trigger           # consolidation level, -1 when none
    int cap               # retained cap, clamped to m_orig
    int words_cap         # layout stride of the consolidated table
    int m_cons            # family size after the current consolidation
    u64* table_cons       # [universe][words_cap]
    u64* masks_cons       # [cap][2]
    int check_level       # degree>=2 prune level, -1 when none
    u64* statevec         # [k+1][words_orig]


cdef struct Engine:
    int universe
    int k
    int ndeg
    int deg1              # index into deg[] of the degree-1 state, -1 if none
    bint dedup
    DegState deg[MAX_DEGREES]
    u64 dead_lo[MAX_K + 1]
    u64 dead_hi[MAX_K + 1]
    u64 chosen_lo         # only used when dedup is off
    u64 chosen_hi
    int hitset[MAX_K]
    int mode_code[MAX_K]
    int mode_param[MAX_K]
    long long nodes
    long long emitted
    long long selection_cuts
    long long consolidations
    long long degree_cut_count[MAX_DEGREES]
    u64 degree_cut_levels[MAX_DEGREES]   # bit j set: cut happened at level j


cdef inline bint consolidated_pre(DegState* st, int level) noexcept nogil:
    # epoch seen by the entry checks of a node at `level`
    return st.trigger >= 0 and level > st.trigger


cdef inline bint consolidated_post(DegState* st, int level) noexcept nogil:
    # epoch seen after this node ran its consolidations
    return st.trigger >= 0 and level >= st.trigger


cdef inline int row_all_ones(u64* row, int m) noexcept nogil:
    cdef int words = m >> 6
    cdef int rem = m & 63
    cdef int w
    for w in range(words):
        if row[w] != <u64> 0xFFFFFFFFFFFFFFFF:
            return 0
    if rem and row[words] != ((<u64> 1 << rem) - 1):
        return 0
    return 1


cdef void consolidate_degree(Engine* eng, DegState* st, int level) noexcept nogil:
    """Rebuild the degree's table over the first `cap` unhit slots of its
    state row at `level`; the state row becomes all-zero in the new width.

    Rows are only rebuilt for cells still alive: dead cells cannot be
    chosen below this node, so their rows are never read.
    """
    cdef u64* sv = st.statevec + level * st.words_orig
    cdef int m_new = 0
    cdef int i, c
    cdef u64 dead_lo = eng.dead_lo[level]
    cdef u64 dead_hi = eng.dead_hi[level]
    memset(st.table_cons, 0, eng.universe * st.words_cap * sizeof(u64))
    for i in range(st.m_orig):
        if (sv[i >> 6] >> (i & 63)) & 1:
            continue
        for c in range(eng.universe):
            if eng.dedup and mask_bit(dead_lo, dead_hi, c):
                continue
            if (st.table_orig[c * st.words_orig + (i >> 6)] >> (i & 63)) & 1:
                st.table_cons[c * st.words_cap + (m_new >> 6)] |= (
                    <u64> 1 << (m_new & 63)
                )
        if st.masks_cons != NULL:
            st.masks_cons[m_new * 2] = st.masks_orig[i * 2]
            st.masks_cons[m_new * 2 + 1] = st.masks_orig[i * 2 + 1]
        m_new += 1
        if m_new == st.cap:
            break
    st.m_cons = m_new
    memset(st.statevec + level * st.words_orig, 0, st.words_orig * sizeof(u64))


cdef int select_slot(Engine* eng, int level) noexcept nogil:
    """Index of the degree-1 set to draw from, or -1 to cut the branch."""
    cdef DegState* st = &eng.deg[eng.deg1]
    cdef u64* sv = st.statevec + level * st.words_orig
    cdef bint cons = consolidated_post(st, level)
    cdef int m = st.m_cons if cons else st.m_orig
    cdef u64* masks = st.masks_cons if cons else st.masks_orig
    cdef int mode = eng.mode_code[level]
    cdef int param = eng.mode_param[level]
    cdef u64 alive_lo = ~eng.dead_lo[level]
    cdef u64 alive_hi = ~eng.dead_hi[level]
    cdef int i, eff, best, best_eff, window, fallback, seen
    if mode == 3:  # first unhit
        for i in range(m):
            if not (sv[i >> 6] >> (i & 63)) & 1:
                return i
        return -1
    best = -1
    best_eff = 1 << 30
    if mode == 0:  # full scan
        for i in range(m):
            if (sv[i >> 6] >> (i & 63)) & 1:
                continue
            eff = popcount64(masks[i * 2] & alive_lo) + popcount64(
                masks[i * 2 + 1] & alive_hi
            )
            if eff < best_eff:
                best_eff = eff
                best = i
                if eff == 0:
                    break
        if best_eff == 0:
            eng.selection_cuts += 1
            return -1
        return best
    if mode == 1:  # min effective size among the first `param` slots
        window = param if param < m else m
        fallback = -1
        for i in range(m):
            if (sv[i >> 6] >> (i & 63)) & 1:
                continue
            if fallback < 0:
                fallback = i
            if i >= window:
                if best >= 0:
                    break
                continue
            eff = popcount64(masks[i * 2] & alive_lo) + popcount64(
                masks[i * 2 + 1] & alive_hi
            )
            if eff < best_eff:
                best_eff = eff
                best = i
                if eff == 0:
                    break
        if best < 0:
            return fallback
        if best_eff == 0:
            eng.selection_cuts += 1
            return -1
        return best
    # mode == 2: min effective size among the first `param` unhit slots
    seen = 0
    for i in range(m):
        if (sv[i >> 6] >> (i & 63)) & 1:
            continue
        eff = popcount64(masks[i * 2] & alive_lo) + popcount64(
            masks[i * 2 + 1] & alive_hi
        )
        if eff < best_eff:
            best_eff = eff
            best = i
            if eff == 0:
                break
        seen += 1
        if seen == param:
            break
    if best_eff == 0:
        eng.selection_cuts += 1
        return -1
    return best


cdef int _emit_cells(Engine* eng, int* extra, int n_extra, int level,
                     object emit) except -1:
    cdef int total = level + n_extra
    cdef int buf[MAX_K]
    cdef int i, j, v
    for i in range(level):
        buf[i] = eng.hitset[i]
    for i in range(n_extra):
        buf[level + i] = extra[i]
    for i in range(1, total):
        v = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > v:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = v
    out = PyTuple_New(total)
    for i in range(total):
        item = <object> buf[i]
        Py_INCREF(item)
        PyTuple_SET_ITEM(out, i, item)
    eng.emitted += 1
    emit(out)
    return 0


cdef int free_fill(Engine* eng, int level, object emit) except -1:
    cdef int need = eng.k - level
    cdef int avail[MAX_K]
    cdef int idx[MAX_K]
    cdef int extra[MAX_K]
    cdef int n_avail = 0
    cdef int c, i, j
    cdef u64 excl_lo, excl_hi
    if need == 0:
        _emit_cells(eng, NULL, 0, level, emit)
        return 0
    if eng.dedup:
        excl_lo = eng.dead_lo[level]
        excl_hi = eng.dead_hi[level]
    else:
        excl_lo = eng.chosen_lo
        excl_hi = eng.chosen_hi
    for c in range(eng.universe):
        if not mask_bit(excl_lo, excl_hi, c):
            avail[n_avail] = c
            n_avail += 1
    if need > n_avail:
        return 0
    for i in range(need):
        idx[i] = i
    while True:
        for i in range(need):
            extra[i] = avail[idx[i]]
        _emit_cells(eng, extra, need, level, emit)
        i = need - 1
        while i >= 0 and idx[i] == n_avail - need + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, need):
            idx[j] = idx[j - 1] + 1
    return 0


cdef int recurse(Engine* eng, int level, object emit) except -1:
    cdef DegState* st
    cdef DegState* d1 = NULL
    cdef int i, di, c, words, m, w
    cdef u64* table
    cdef u64* masks
    cdef u64* src_row
    cdef u64* dst_row
    cdef u64 set_lo, set_hi, branch_lo, branch_hi, below_lo, below_hi, low
    cdef bint cons
    eng.nodes += 1
    if eng.deg1 >= 0:
        d1 = &eng.deg[eng.deg1]
    if d1 == NULL:
        free_fill(eng, level, emit)
        return 0
    m = d1.m_cons if consolidated_pre(d1, level) else d1.m_orig
    if m == 0 or row_all_ones(d1.statevec + level * d1.words_orig, m):
        free_fill(eng, level, emit)
        return 0
    if level == eng.k:
        return 0
    for di in range(eng.ndeg):
        st = &eng.deg[di]
        if st.check_level == level:
            m = st.m_cons if consolidated_pre(st, level) else st.m_orig
            if m and not row_all_ones(st.statevec + level * st.words_orig, m):
                eng.degree_cut_count[di] += 1
                eng.degree_cut_levels[di] |= <u64> 1 << level
                return 0
    for di in range(eng.ndeg):
        st = &eng.deg[di]
        if st.trigger == level:
            consolidate_degree(eng, st, level)
            eng.consolidations += 1
    i = select_slot(eng, level)
    if i < 0:
        return 0
    cons = consolidated_post(d1, level)
    masks = d1.masks_cons if cons else d1.masks_orig
    set_lo = masks[i * 2]
    set_hi = masks[i * 2 + 1]
    if eng.dedup:
        branch_lo = set_lo & ~eng.dead_lo[level]
        branch_hi = set_hi & ~eng.dead_hi[level]
    else:
        branch_lo = set_lo
        branch_hi = set_hi
    while branch_lo or branch_hi:
        if branch_lo:
            low = branch_lo & (branch_lo - 1)
            low ^= branch_lo
            branch_lo &= branch_lo - 1
            c = _u64_low_index(low)
        else:
            low = branch_hi & (branch_hi - 1)
            low ^= branch_hi
            branch_hi &= branch_hi - 1
            c = 64 + _u64_low_index(low)
        eng.hitset[level] = c
        for di in range(eng.ndeg):
            st = &eng.deg[di]
            cons = consolidated_post(st, level)
            words = st.words_cap if cons else st.words_orig
            table = st.table_cons if cons else st.table_orig
            src_row = st.statevec + level * st.words_orig
            dst_row = st.statevec + (level + 1) * st.words_orig
            for w in range(words):
                dst_row[w] = src_row[w] | table[c * words + w]
        if eng.dedup:
            if c < 64:
                below_lo = set_lo & (
                    <u64> 0xFFFFFFFFFFFFFFFF
                    if c == 63
                    else ((<u64> 1 << (c + 1)) - 1)
                )
                below_hi = 0
            else:
                below_lo = set_lo
                below_hi = set_hi & (
                    <u64> 0xFFFFFFFFFFFFFFFF
                    if c == 127
                    else ((<u64> 1 << (c - 63)) - 1)
                )
            eng.dead_lo[level + 1] = eng.dead_lo[level] | below_lo
            eng.dead_hi[level + 1] = eng.dead_hi[level] | below_hi
        else:
            eng.dead_lo[level + 1] = eng.dead_lo[level]
            eng.dead_hi[level + 1] = eng.dead_hi[level]
            if c < 64:
                eng.chosen_lo |= <u64> 1 << c
            else:
                eng.chosen_hi |= <u64> 1 << (c - 64)
        recurse(eng, level + 1, emit)
        if not eng.dedup:
            if c < 64:
                eng.chosen_lo &= ~(<u64> 1 << c)
            else:
                eng.chosen_hi &= ~(<u64> 1 << (c - 64))
    return 0


def run_hitting(int universe, int k, degrees, masks_by_degree, bint dedup,
                check_levels, consolidations, modes, emit):
    """Positional twin of the reference engine; see _pykernels.run_hitting
    for the argument contract."""
    if universe < 1 or universe > 128:
        raise ValueError("universe must be 1..128")
    if k < 1 or k > universe:
        raise ValueError("k out of range")
    if len(degrees) > MAX_DEGREES:
        raise ValueError("too many degree families")

    cdef Engine* eng = <Engine*> calloc(1, sizeof(Engine))
    if eng == NULL:
        raise MemoryError()
    eng.universe = universe
    eng.k = k
    eng.ndeg = len(degrees)
    eng.deg1 = -1
    eng.dedup = dedup

    cdef int di, i, c, m, words, level
    cdef DegState* st
    cdef u64 lo, hi

    for level in range(k):
        eng.mode_code[level] = modes[level][0]
        eng.mode_param[level] = modes[level][1]

    try:
        for di in range(eng.ndeg):
            st = &eng.deg[di]
            st.degree = degrees[di]
            if st.degree == 1:
                eng.deg1 = di
            masks_list = masks_by_degree[di]
            m = len(masks_list)
            st.m_orig = m
            words = (m + 63) >> 6
            if words == 0:
                words = 1
            st.words_orig = words
            st.table_orig = <u64*> calloc(universe * words, sizeof(u64))
            st.masks_orig = <u64*> calloc(max(m, 1) * 2, sizeof(u64))
            st.statevec = <u64*> calloc((k + 1) * words, sizeof(u64))
            if not st.table_orig or not st.masks_orig or not st.statevec:
                raise MemoryError()
            for i in range(m):
                mask_obj = masks_list[i]
                lo = <u64> (mask_obj & 0xFFFFFFFFFFFFFFFF)
                hi = <u64> (mask_obj >> 64)
                st.masks_orig[i * 2] = lo
                st.masks_orig[i * 2 + 1] = hi
                for c in range(universe):
                    if mask_bit(lo, hi, c):
                        st.table_orig[c * words + (i >> 6)] |= (
                            <u64> 1 << (i & 63)
                        )
            st.check_level = check_levels.get(st.degree, -1)
            entry = consolidations.get(st.degree)
            if entry is None:
                st.trigger = -1
            else:
                st.trigger = entry[0]
                st.cap = min(<int> entry[1], m) if m else 1
                if st.cap < 1:
                    st.cap = 1
                st.words_cap = (st.cap + 63) >> 6
                st.table_cons = <u64*> calloc(
                    universe * st.words_cap, sizeof(u64)
                )
                st.masks_cons = <u64*> calloc(st.cap * 2, sizeof(u64))
                if not st.table_cons or not st.masks_cons:
                    raise MemoryError()

        recurse(eng, 0, emit)

        stats = {
            "nodes": eng.nodes,
            "emitted": eng.emitted,
            "selection_cuts": eng.selection_cuts,
            "consolidations": eng.consolidations,
            "degree_cuts": {},
            "degree_cut_levels": {},
        }
        for di in range(eng.ndeg):
            if eng.deg[di].degree > 1:
                stats["degree_cuts"][eng.deg[di].degree] = eng.degree_cut_count[di]
                levels = set()
                for level in range(k + 1):
                    if (eng.degree_cut_levels[di] >> level) & 1:
                        levels.add(level)
                stats["degree_cut_levels"][eng.deg[di].degree] = levels
        return stats
    finally:
        for di in range(eng.ndeg):
            st = &eng.deg[di]
            if st.table_orig != NULL:
                free(st.table_orig)
            if st.masks_orig != NULL:
                free(st.masks_orig)
            if st.statevec != NULL:
                free(st.statevec)
            if st.table_cons != NULL:
                free(st.table_cons)
            if st.masks_cons != NULL:
                free(st.masks_cons)
        free(eng)
