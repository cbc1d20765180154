"""Pure-Python kernels. Reference semantics for the compiled ``_ckernels`` module.

Terms are encoded as indices ``0..n-1`` in term order, so the arguments of an
application always carry smaller indices than the application itself. An
application is ``(index, symbol_id, arg_indices)``.

Formula programs are postfix lists of ``(op, arg)`` pairs:

    OP_EQ k    push  block[a_k] == block[b_k]
    OP_REL k   push  bit of the relation group that atom k falls into
    OP_NOT     pop one, push negation
    OP_AND n   pop n, push conjunction
    OP_OR n    pop n, push disjunction
    OP_CONST b push b
"""

from __future__ import annotations

OP_EQ, OP_REL, OP_NOT, OP_AND, OP_OR, OP_CONST = range(6)

LIMIT_EXCEEDED = None


def _forced_table(n, apps):
    """For each index: list of earlier applications with the same symbol."""
    info = [None] * n
    by_sym: dict[int, list] = {}
    for idx, sym, args in apps:
        info[idx] = (args, by_sym.setdefault(sym, [])[:])
        by_sym[sym].append((idx, args))
    return info


def admissible_partitions(n, apps, limit):
    """Restricted growth strings of all congruence-respecting partitions.

    Returns ``None`` when more than ``limit`` partitions exist.
    """
    out = []
    if _walk(n, apps, limit, lambda block: out.append(tuple(block))) is LIMIT_EXCEEDED:
        return None
    return out


def _walk(n, apps, limit, emit):
    info = _forced_table(n, apps)
    block = [0] * n
    count = 0

    def rec(i, nblocks):
        nonlocal count
        if i == n:
            count += 1
            if count > limit:
                return False
            emit(block)
            return True
        entry = info[i]
        if entry is not None:
            args, earlier = entry
            for j, jargs in earlier:
                if all(block[a] == block[b] for a, b in zip(args, jargs)):
                    block[i] = block[j]
                    return rec(i + 1, nblocks)
        for b in range(nblocks + 1):
            block[i] = b
            if not rec(i + 1, nblocks + 1 if b == nblocks else nblocks):
                return False
        return True

    if n == 0:
        count = 1
        emit(block)
        return True
    return True if rec(0, 0) else LIMIT_EXCEEDED


def relation_groups(block, rel_atoms):
    """Group relation atoms by (symbol, blocks of arguments); ids in first-seen order."""
    keys: dict[tuple, int] = {}
    group = []
    for sym, args in rel_atoms:
        key = (sym,) + tuple(block[a] for a in args)
        gid = keys.get(key)
        if gid is None:
            gid = keys[key] = len(keys)
        group.append(gid)
    return group, len(keys)


def run_program(program, block, eq_atoms, group, mask):
    stack = []
    for op, arg in program:
        if op == OP_EQ:
            a, b = eq_atoms[arg]
            stack.append(block[a] == block[b])
        elif op == OP_REL:
            stack.append(bool((mask >> group[arg]) & 1))
        elif op == OP_NOT:
            stack.append(not stack.pop())
        elif op == OP_AND:
            vals = stack[len(stack) - arg:] if arg else []
            del stack[len(stack) - arg:]
            stack.append(all(vals))
        elif op == OP_OR:
            vals = stack[len(stack) - arg:] if arg else []
            del stack[len(stack) - arg:]
            stack.append(any(vals))
        else:
            stack.append(bool(arg))
    return stack[-1]


def filtered_partitions(n, apps, eq_atoms, rel_atoms, program, limit, max_groups):
    """All (partition, relation-group mask) pairs making the program true.

    Returns ``None`` when the partition count exceeds ``limit``; raises
    ``OverflowError`` when a partition induces more than ``max_groups``
    relation groups.
    """
    out = []

    def emit(block):
        group, g = relation_groups(block, rel_atoms)
        if g > max_groups:
            raise OverflowError(g)
        for mask in range(1 << g):
            if run_program(program, block, eq_atoms, group, mask):
                out.append((tuple(block), mask))

    if _walk(n, apps, limit, emit) is LIMIT_EXCEEDED:
        return None
    return out


def congruence_reps(n, apps, eqs):
    """Union-find congruence closure. Returns the least index of each node's class."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb
        return True

    for a, b in eqs:
        union(a, b)
    changed = True
    while changed:
        changed = False
        table: dict[tuple, int] = {}
        for idx, sym, args in apps:
            key = (sym,) + tuple(find(a) for a in args)
            other = table.get(key)
            if other is None:
                table[key] = idx
            elif union(other, idx):
                changed = True
    return [find(i) for i in range(n)]
