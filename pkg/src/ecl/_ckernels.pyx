# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_kernels_py``."""

from libc.stdlib cimport malloc, free

cdef enum:
    OP_EQ = 0
    OP_REL = 1
    OP_NOT = 2
    OP_AND = 3
    OP_OR = 4
    OP_CONST = 5


cdef struct AppTable:
    int n
    int maxar
    int *sym        # per index, -1 when not an application
    int *arity
    int *args       # n * maxar


cdef int _load_apps(AppTable *t, int n, apps) except -1:
    cdef int maxar = 1
    for idx, sym, a in apps:
        if len(a) > maxar:
            maxar = len(a)
    t.n = n
    t.maxar = maxar
    t.sym = <int *> malloc(max(n, 1) * sizeof(int))
    t.arity = <int *> malloc(max(n, 1) * sizeof(int))
    t.args = <int *> malloc(max(n * maxar, 1) * sizeof(int))
    if t.sym == NULL or t.arity == NULL or t.args == NULL:
        raise MemoryError()
    cdef int i, k
    for i in range(n):
        t.sym[i] = -1
        t.arity[i] = 0
    for idx, sym, a in apps:
        i = idx
        t.sym[i] = sym
        t.arity[i] = len(a)
        k = 0
        for x in a:
            t.args[i * maxar + k] = x
            k += 1
    return 0


cdef void _free_apps(AppTable *t):
    free(t.sym)
    free(t.arity)
    free(t.args)


cdef inline int _forced(AppTable *t, int *block, int i):
    """Block forced on application i by an earlier congruent application, else -1."""
    cdef int j, k, s = t.sym[i], ar
    if s < 0:
        return -1
    ar = t.arity[i]
    for j in range(i):
        if t.sym[j] != s:
            continue
        for k in range(ar):
            if block[t.args[i * t.maxar + k]] != block[t.args[j * t.maxar + k]]:
                break
        else:
            return block[j]
    return -1


cdef class _Walker:
    """Iterative enumeration of restricted growth strings with congruence forcing."""

    cdef AppTable t
    cdef int *block
    cdef int *nblocks     # number of blocks used by positions < i
    cdef int *choice      # current choice at i, -2 when forced
    cdef int n

    def __cinit__(self, int n, apps):
        self.n = n
        _load_apps(&self.t, n, apps)
        self.block = <int *> malloc((n + 1) * sizeof(int))
        self.nblocks = <int *> malloc((n + 1) * sizeof(int))
        self.choice = <int *> malloc((n + 1) * sizeof(int))
        if self.block == NULL or self.nblocks == NULL or self.choice == NULL:
            raise MemoryError()

    def __dealloc__(self):
        _free_apps(&self.t)
        free(self.block)
        free(self.nblocks)
        free(self.choice)

    cdef int _descend(self, int i):
        """Fill positions i..n-1 with their first choices. Returns n."""
        cdef int f
        while i < self.n:
            f = _forced(&self.t, self.block, i)
            if f >= 0:
                self.block[i] = f
                self.choice[i] = -2
                self.nblocks[i + 1] = self.nblocks[i]
            else:
                self.block[i] = 0
                self.choice[i] = 0
                self.nblocks[i + 1] = self.nblocks[i] + (1 if self.nblocks[i] == 0 else 0)
            i += 1
        return i

    cdef bint _advance(self):
        """Move to the next string. False when exhausted."""
        cdef int i = self.n - 1, c
        while i >= 0:
            c = self.choice[i]
            if c >= 0 and c < self.nblocks[i]:
                c += 1
                self.choice[i] = c
                self.block[i] = c
                self.nblocks[i + 1] = self.nblocks[i] + (1 if c == self.nblocks[i] else 0)
                self._descend(i + 1)
                return True
            i -= 1
        return False


def admissible_partitions(int n, apps, long limit):
    cdef _Walker w
    cdef long count = 0
    cdef int i
    out = []
    if n == 0:
        return [()]
    w = _Walker(n, apps)
    w.nblocks[0] = 0
    w._descend(0)
    while True:
        count += 1
        if count > limit:
            return None
        out.append(tuple([w.block[i] for i in range(n)]))
        if not w._advance():
            break
    return out


cdef struct Program:
    int length
    int *op
    int *arg


cdef int _run(Program *p, int *block, int *eqa, int *eqb, int *group,
              long mask, char *stack) noexcept:
    cdef int sp = 0, pc, k, j
    cdef char v
    for pc in range(p.length):
        k = p.arg[pc]
        if p.op[pc] == OP_EQ:
            stack[sp] = block[eqa[k]] == block[eqb[k]]
            sp += 1
        elif p.op[pc] == OP_REL:
            stack[sp] = (mask >> group[k]) & 1
            sp += 1
        elif p.op[pc] == OP_NOT:
            stack[sp - 1] = not stack[sp - 1]
        elif p.op[pc] == OP_AND:
            v = 1
            for j in range(sp - k, sp):
                if not stack[j]:
                    v = 0
            sp -= k
            stack[sp] = v
            sp += 1
        elif p.op[pc] == OP_OR:
            v = 0
            for j in range(sp - k, sp):
                if stack[j]:
                    v = 1
            sp -= k
            stack[sp] = v
            sp += 1
        else:
            stack[sp] = 1 if k else 0
            sp += 1
    return stack[sp - 1]


def filtered_partitions(int n, apps, eq_atoms, rel_atoms, program, long limit,
                        int max_groups):
    cdef _Walker w
    cdef long count = 0, mask, nmask
    cdef int i, j, k, g, ne = len(eq_atoms), nr = len(rel_atoms), maxar = 1, same
    cdef Program p
    cdef int *eqa = <int *> malloc(max(ne, 1) * sizeof(int))
    cdef int *eqb = <int *> malloc(max(ne, 1) * sizeof(int))
    cdef int *rsym = <int *> malloc(max(nr, 1) * sizeof(int))
    cdef int *rar = <int *> malloc(max(nr, 1) * sizeof(int))
    cdef int *group = <int *> malloc(max(nr, 1) * sizeof(int))
    cdef int *rargs
    cdef int *zero_block = NULL
    cdef int *blk
    cdef char *stack
    p.length = len(program)
    p.op = <int *> malloc(max(p.length, 1) * sizeof(int))
    p.arg = <int *> malloc(max(p.length, 1) * sizeof(int))
    stack = <char *> malloc(max(p.length, 1) + 1)
    for sym, a in rel_atoms:
        if len(a) > maxar:
            maxar = len(a)
    rargs = <int *> malloc(max(nr * maxar, 1) * sizeof(int))
    out = []
    try:
        for i, (a, b) in enumerate(eq_atoms):
            eqa[i] = a
            eqb[i] = b
        for i, (sym, a) in enumerate(rel_atoms):
            rsym[i] = sym
            rar[i] = len(a)
            for k, x in enumerate(a):
                rargs[i * maxar + k] = x
        for i, (o, x) in enumerate(program):
            p.op[i] = o
            p.arg[i] = x
        if n == 0:
            zero_block = <int *> malloc(sizeof(int))
            w = None
        else:
            w = _Walker(n, apps)
            w.nblocks[0] = 0
            w._descend(0)
        while True:
            count += 1
            if count > limit:
                return None
            if w is None:
                blk = zero_block
            else:
                blk = w.block
            g = 0
            for i in range(nr):
                group[i] = -1
                for j in range(i):
                    if rsym[j] != rsym[i]:
                        continue
                    same = 1
                    for k in range(rar[i]):
                        if blk[rargs[i * maxar + k]] != blk[rargs[j * maxar + k]]:
                            same = 0
                            break
                    if same:
                        group[i] = group[j]
                        break
                if group[i] < 0:
                    group[i] = g
                    g += 1
            if g > max_groups:
                raise OverflowError(g)
            nmask = (<long> 1) << g
            row = None
            for mask in range(nmask):
                if _run(&p, blk, eqa, eqb, group, mask, stack):
                    if row is None:
                        row = tuple([blk[i] for i in range(n)])
                    out.append((row, mask))
            if w is None or not w._advance():
                break
        return out
    finally:
        free(eqa)
        free(eqb)
        free(rsym)
        free(rar)
        free(group)
        free(rargs)
        free(p.op)
        free(p.arg)
        free(stack)
        free(zero_block)


def congruence_reps(int n, apps, eqs):
    cdef AppTable t
    cdef int *parent
    cdef int i, j, k, ra, rb, ar
    cdef bint changed, same
    if n == 0:
        return []
    _load_apps(&t, n, apps)
    parent = <int *> malloc(n * sizeof(int))
    try:
        for i in range(n):
            parent[i] = i
        for a, b in eqs:
            ra = _find(parent, a)
            rb = _find(parent, b)
            if ra < rb:
                parent[rb] = ra
            elif rb < ra:
                parent[ra] = rb
        changed = True
        while changed:
            changed = False
            for i in range(n):
                if t.sym[i] < 0:
                    continue
                ar = t.arity[i]
                for j in range(i):
                    if t.sym[j] != t.sym[i]:
                        continue
                    same = True
                    for k in range(ar):
                        if _find(parent, t.args[i * t.maxar + k]) != _find(parent, t.args[j * t.maxar + k]):
                            same = False
                            break
                    if same:
                        ra = _find(parent, i)
                        rb = _find(parent, j)
                        if ra != rb:
                            if ra < rb:
                                parent[rb] = ra
                            else:
                                parent[ra] = rb
                            changed = True
                        break
        return [_find(parent, i) for i in range(n)]
    finally:
        free(parent)
        _free_apps(&t)


cdef inline int _find(int *parent, int x) noexcept:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x
